#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace panelfx {

enum class errc {
  duplicate_cell,
  non_finite_value,
  out_of_range,
  unknown_variable,
  empty_group,
  unmapped_entity,
  rank_deficient,
  too_few_observations,
  invalid_df,
  invalid_level,
  degenerate_regressor,
  too_many_entities,
  too_few_entities,
  degenerate_between_regression,
  all_singleton_entities,
  mismatched_fits,
  schema_mismatch,
  parse_error,
  unknown_ticker,
  duplicate_domain,
  invalid_config,
};

// CLI exit-code buckets: usage -> 1, data -> 2, numeric -> 3.
enum class error_class { usage, data, numeric };

inline error_class classify(errc c) {
  switch (c) {
    case errc::rank_deficient:
    case errc::degenerate_regressor:
    case errc::degenerate_between_regression:
    case errc::too_many_entities:
      return error_class::numeric;
    case errc::invalid_df:
    case errc::invalid_level:
      return error_class::usage;
    default:
      return error_class::data;
  }
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::duplicate_cell: return "DuplicateCell";
    case errc::non_finite_value: return "NonFiniteValue";
    case errc::out_of_range: return "OutOfRange";
    case errc::unknown_variable: return "UnknownVariable";
    case errc::empty_group: return "EmptyGroup";
    case errc::unmapped_entity: return "UnmappedEntity";
    case errc::rank_deficient: return "RankDeficient";
    case errc::too_few_observations: return "TooFewObservations";
    case errc::invalid_df: return "InvalidDf";
    case errc::invalid_level: return "InvalidLevel";
    case errc::degenerate_regressor: return "DegenerateRegressor";
    case errc::too_many_entities: return "TooManyEntities";
    case errc::too_few_entities: return "TooFewEntities";
    case errc::degenerate_between_regression: return "DegenerateBetweenRegression";
    case errc::all_singleton_entities: return "AllSingletonEntities";
    case errc::mismatched_fits: return "MismatchedFits";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::parse_error: return "ParseError";
    case errc::unknown_ticker: return "UnknownTicker";
    case errc::duplicate_domain: return "DuplicateDomain";
    case errc::invalid_config: return "InvalidConfig";
  }
  return "Error";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }
  error_class cls() const noexcept { return classify(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) { throw error(code, msg); }

}  // namespace panelfx

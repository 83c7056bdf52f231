#include "dubalign/error.hpp"

namespace dubalign {

InfeasibleSegmentation::InfeasibleSegmentation(std::size_t m, std::size_t k,
                                               std::string where)
    : Error("infeasible segmentation: " + std::to_string(m) +
            " target words cannot fill " + std::to_string(k) + " segments" +
            (where.empty() ? "" : " (" + where + ")")),
      m_(m),
      k_(k) {}

ParseError::ParseError(std::size_t line, std::string field, const std::string& what)
    : Error("line " + std::to_string(line) + ": field '" + field + "': " + what),
      line_(line),
      field_(std::move(field)) {}

}  // namespace dubalign

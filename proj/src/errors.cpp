#include "hems/errors.hpp"

namespace hems {

ValidationError::ValidationError(std::string field, const std::string& what)
    : Error(field + ": " + what), field_(std::move(field))
{
}

} // namespace hems

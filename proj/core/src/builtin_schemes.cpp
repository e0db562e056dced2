#include "colcirc/codec.hpp"
#include "scheme_support.hpp"

namespace colcirc {

void register_builtin_schemes(CodecRegistry& registry) {
  detail::register_representation_schemes(registry);
  detail::register_numeric_schemes(registry);
  detail::register_dictionary_schemes(registry);
  detail::register_composed_schemes(registry);
}

}  // namespace colcirc

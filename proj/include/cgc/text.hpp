#ifndef CGC_TEXT_HPP
#define CGC_TEXT_HPP

// Text forms. Descriptors:
//   Z | Z^n | Z/m | Z[1/p] | Prufer(p) | Z(p^inf) | Q | Q/Z
//   | Sum(d1, d2, ...) | CyclicSum([m1, m2, ...]; rule)
// with rule one of repeat-last | cycle | odd-primes.
//
// Elements (shape depends on the group): integers, reduced fractions "a/b",
// tuples "(x, y)", finite-support maps "{0:2, 3:1}", Prufer pairs "(a, i)".
// Parsing canonicalizes; printing emits the unique canonical form, so
// print(parse(print(x))) == print(x) byte for byte.

#include "cgc/groups.hpp"

#include <string>

namespace cgc {

/// Parse failure with the offending position baked into what().
struct ParseError : std::invalid_argument {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::invalid_argument(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

GroupDescriptor parse_descriptor(const std::string& text);
std::string descriptor_text(const GroupDescriptor& G);

Element parse_element(const GroupDescriptor& G, const std::string& text);
std::string element_text(const Element& x);

}  // namespace cgc

#endif

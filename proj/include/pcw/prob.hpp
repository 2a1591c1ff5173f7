// SPDX-License-Identifier: MIT
// Exact probabilities.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace pcw {

using Prob = boost::multiprecision::cpp_rational;

// Accepts "n" or "n/d" with non-negative integers; throws std::invalid_argument.
Prob parse_prob(std::string_view text);

// "1", "3/40"; always in lowest terms.
std::string prob_str(const Prob& p);

}  // namespace pcw

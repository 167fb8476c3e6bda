#pragma once

#include <string>

namespace schwinger::tsv {

/// Fixed-format scientific number used by every TSV writer (byte-stable output).
std::string num(double x);

/// Fixed-point number with the given number of decimals, for headers.
std::string fixed(double x, int decimals);

}  // namespace schwinger::tsv

#pragma once

#include <cstddef>

// Process-wide allocation accounting through replaced operator new/delete.
// Linked into the acceptance binary only.
namespace alloc_meter {

std::size_t current_bytes();
std::size_t peak_bytes();

/// Reset the peak to the current live total.
void reset_peak();

} // namespace alloc_meter

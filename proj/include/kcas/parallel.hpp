#pragma once

// Static-partition parallel loop. Work items must be independent; results
// are identical for any thread count.

#include <functional>

namespace kcas {

void set_num_threads(int n);  // n <= 0 selects hardware concurrency
int num_threads();

void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace kcas

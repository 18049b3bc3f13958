#pragma once

#include <functional>

namespace sqom {

// Runs body(i) for i in [0, n) on up to `threads` workers. If any call
// throws, the exception from the lowest index is rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace sqom

#pragma once

namespace vfmga {

/// Selects the OpenMP kernel or the serial reference loop. Both produce
/// identical results; the serial path exists for testing and benchmarking.
enum class Execution { kSerial, kParallel };

}  // namespace vfmga

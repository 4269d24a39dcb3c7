#pragma once

namespace dopt {

/// Selects the serial reference kernel or its OpenMP counterpart.
enum class ExecPolicy { kSerial, kParallel };

}  // namespace dopt

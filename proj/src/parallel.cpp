#include "pinchlab/parallel.hpp"

namespace pinchlab {

bool& use_serial_kernels() {
    static bool flag = false;
    return flag;
}

} // namespace pinchlab

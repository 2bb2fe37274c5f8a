#include "bagstab/error.hpp"

namespace bagstab {

void require(bool cond, const std::string& what) {
  if (!cond) throw ArgumentError(what);
}

}  // namespace bagstab

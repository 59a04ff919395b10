#include "prham/backend.hpp"

#include "backend_impl.hpp"

namespace prham {

BackendPtr Backend::torus(int truncation, int padding) {
  return make_torus_backend(truncation, padding);
}

BackendPtr Backend::sphere(int truncation, int padding) {
  return make_sphere_backend(truncation, padding);
}

}  // namespace prham

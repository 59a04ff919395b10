#pragma once

#include "prham/backend.hpp"

namespace prham {

BackendPtr make_torus_backend(int truncation, int padding);
BackendPtr make_sphere_backend(int truncation, int padding);

}  // namespace prham

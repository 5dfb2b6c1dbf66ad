#pragma once

#include "yindex/assembly.hpp"
#include "yindex/error.hpp"
#include "yindex/geometry.hpp"
#include "yindex/hopf.hpp"
#include "yindex/io.hpp"
#include "yindex/mesh.hpp"
#include "yindex/spectra.hpp"

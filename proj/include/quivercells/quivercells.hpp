#pragma once

#include "field.hpp"
#include "matrix.hpp"
#include "quiver.hpp"
#include "cover.hpp"
#include "representation.hpp"
#include "ext.hpp"
#include "homalg.hpp"
#include "enumerate.hpp"
#include "points.hpp"
#include "stability.hpp"
#include "cells.hpp"
#include "torus.hpp"
#include "kac.hpp"
#include "io.hpp"

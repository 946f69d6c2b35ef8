#pragma once

#include "ptope/autodiff.hpp"
#include "ptope/dual.hpp"
#include "ptope/embedding.hpp"
#include "ptope/errors.hpp"
#include "ptope/experiment.hpp"
#include "ptope/interval.hpp"
#include "ptope/io.hpp"
#include "ptope/linalg.hpp"
#include "ptope/matrix.hpp"
#include "ptope/parametope.hpp"
#include "ptope/systems.hpp"
#include "ptope/verify.hpp"

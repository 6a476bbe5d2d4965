#pragma once

#include "cathyp/errors.hpp"
#include "cathyp/constitutive.hpp"
#include "cathyp/assembly.hpp"
#include "cathyp/charpoly.hpp"
#include "cathyp/spectral.hpp"
#include "cathyp/modal.hpp"
#include "cathyp/sampling.hpp"
#include "cathyp/report.hpp"
#include "cathyp/sweep.hpp"
#include "cathyp/reproduce.hpp"

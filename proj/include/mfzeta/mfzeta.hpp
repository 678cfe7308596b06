#pragma once

#include "mfzeta/config.hpp"
#include "mfzeta/dimensions.hpp"
#include "mfzeta/errors.hpp"
#include "mfzeta/ifs.hpp"
#include "mfzeta/io.hpp"
#include "mfzeta/log_ratio.hpp"
#include "mfzeta/oracle.hpp"
#include "mfzeta/parallel.hpp"
#include "mfzeta/parse.hpp"
#include "mfzeta/polynomial.hpp"
#include "mfzeta/rational.hpp"
#include "mfzeta/regularity.hpp"
#include "mfzeta/spectra.hpp"
#include "mfzeta/verify.hpp"
#include "mfzeta/zeta.hpp"

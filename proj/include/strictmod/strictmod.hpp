#pragma once

// Everything: series and matrices over k((pi)), sigma-modules, the residue Hopf
// algebra, local points, ramification bookkeeping, divisible towers, SH objects, CLI.

#include "strictmod/error.hpp"
#include "strictmod/galois_field.hpp"
#include "strictmod/kmatrix.hpp"
#include "strictmod/series.hpp"
#include "strictmod/series_matrix.hpp"
#include "strictmod/fp_linalg.hpp"
#include "strictmod/semilinear.hpp"
#include "strictmod/base.hpp"
#include "strictmod/modcat.hpp"
#include "strictmod/etale.hpp"
#include "strictmod/hopf.hpp"
#include "strictmod/points.hpp"
#include "strictmod/ramif.hpp"
#include "strictmod/divisible.hpp"
#include "strictmod/sh.hpp"
#include "strictmod/io.hpp"
#include "strictmod/cli.hpp"

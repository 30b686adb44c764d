#pragma once

#include "qmn/complex_matrix.hpp"
#include "qmn/density.hpp"
#include "qmn/eigh.hpp"
#include "qmn/errors.hpp"
#include "qmn/graph.hpp"
#include "qmn/joint_table.hpp"
#include "qmn/markov.hpp"
#include "qmn/model_io.hpp"
#include "qmn/pairwise.hpp"
#include "qmn/pauli.hpp"
#include "qmn/sweep.hpp"
#include "qmn/transfer.hpp"

#pragma once

#include "sftlab/error.hpp"
#include "sftlab/random.hpp"
#include "sftlab/shift_space.hpp"
#include "sftlab/markov_measure.hpp"
#include "sftlab/coordinate_set.hpp"
#include "sftlab/partition.hpp"
#include "sftlab/entropy.hpp"
#include "sftlab/excellent.hpp"
#include "sftlab/conditional_square.hpp"
#include "sftlab/pair_lab.hpp"
#include "sftlab/io.hpp"
#include "sftlab/report.hpp"
#include "sftlab/verify.hpp"

#pragma once

#include "dfpfisher/linalg.hpp"
#include "dfpfisher/fisher_matrix.hpp"
#include "dfpfisher/qubit.hpp"
#include "dfpfisher/fisher.hpp"
#include "dfpfisher/probe_search.hpp"
#include "dfpfisher/tomo.hpp"
#include "dfpfisher/wfh.hpp"
#include "dfpfisher/io.hpp"

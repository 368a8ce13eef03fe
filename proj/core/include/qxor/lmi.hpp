#pragma once

#include <vector>

#include "qxor/mat.hpp"

// Dense log-barrier path-following solver for small linear matrix inequality
// problems
//
//   minimize  c^T z   subject to  F_b(z) = F_b0 + sum_j z_j F_bj >= 0  for all b
//
// with real variables z and Hermitian blocks F_b. Used for the instrument
// subproblem, trace-class tuple norms and the Pietsch LP.
namespace qxor::lmi {

struct Entry {
  Index row;
  Index col;
  Complex value;
};

struct Block {
  ComplexMatrix constant;                  // F_b0, Hermitian
  std::vector<std::vector<Entry>> coeffs;  // per variable; each list must describe a Hermitian matrix
};

struct Problem {
  RealVector cost;
  std::vector<Block> blocks;

  Index variables() const { return cost.size(); }
  // Appends a Hermitian coefficient entry and its mirror.
  static void add_hermitian(std::vector<Entry>& list, Index row, Index col, Complex value);
};

struct Options {
  double rel_gap = 1e-9;
  double abs_gap = 1e-12;
  int max_newton = 600;
  double growth = 12.0;
  bool want_duals = false;
};

struct Result {
  RealVector z;
  double value = 0.0;
  // value - (total block size)/t: the standard central-path gap bound.
  double lower = 0.0;
  bool converged = false;
  int newton_steps = 0;
  std::vector<ComplexMatrix> duals;  // F_b(z)^{-1} / t, approximately dual feasible
};

// Requires F_b(start) to be positive definite for every block.
Result minimize(const Problem& problem, const RealVector& start, const Options& options = {});

ComplexMatrix evaluate_block(const Block& block, const RealVector& z);

}  // namespace qxor::lmi

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ddrom
{

using Index = Eigen::Index;
using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Selects between the serial reference path and the OpenMP kernel. Both produce
// bit-identical results: parallel loops only fill independent slots, and every
// reduction is finished serially.
enum class Execution
{
  Serial,
  Parallel
};

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public Error
{
public:
  using Error::Error;
};

class NonConvergenceError : public Error
{
public:
  NonConvergenceError(const std::string &what, double last_estimate)
    : Error(what), last_estimate_(last_estimate)
  {
  }
  double last_estimate() const noexcept { return last_estimate_; }

private:
  double last_estimate_;
};

// The three rank conditions certifying that a trajectory determines H(sigma) and H'(sigma).
enum class RankCondition
{
  Existence,        // rank[U z b] == rank[U z]
  Uniqueness,       // rank[U z] == rank[U] + 1
  HermiteExistence  // rank[U z b1] == rank[U z]
};

const char *to_string(RankCondition c) noexcept;

class InformativityError : public Error
{
public:
  InformativityError(RankCondition condition, Complex sigma, const std::string &detail);
  RankCondition condition() const noexcept { return condition_; }
  Complex sigma() const noexcept { return sigma_; }

private:
  RankCondition condition_;
  Complex sigma_;
};

}  // namespace ddrom

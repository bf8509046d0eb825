#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

namespace malab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  // validation / construction
  BadDomain,
  BadSpec,
  PointNotOnBoundary,
  NotTangent,
  OutOfDomain,
  ValidityViolated,
  IndexOutOfRange,
  BadMu,
  UnsupportedFamily,
  UnsupportedDomain,
  ParameterOutOfRange,
  GammaZero,
  DenominatorSign,
  NegativeK,
  PsiNotPositive,
  MonotonicityViolated,
  FlowDataInvalid,
  MissingFlow,
  KOutOfRange,
  BadDefiningFunction,
  RhoTooDeep,
  LambdaOutOfRange,
  GaugeUndefined,
  StepTooLarge,
  GridTooCoarse,
  NotImplemented,
  // solver failures
  NotIntegrable,
  NoRoot,
  NoBracket,
  SlopeCollapse,
  StepRejected,
  MaxIterations,
  SingularHessian,
  DivergedNonConvex,
  ConvexityLost,
  DeterminantFloor,
  TimeStepTooLarge,
};

const char* error_code_name(ErrorCode c);

// True for failures of a numerical process (as opposed to bad input); the CLI
// maps these to exit code 3 and everything else to exit code 2.
bool is_solver_failure(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) raise(code, what);
}

// A C^2 scalar field given by evaluators. grad/hess may be empty when a use
// site only needs values; call sites requiring derivatives check first.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
};

}  // namespace malab

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace fhspec {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IMat = Eigen::MatrixXi;
using IVec = Eigen::VectorXi;

constexpr double kPi = 3.141592653589793238462643383279502884;

// Which physical quantity an axis of a joint representation indexes.
enum class Axis { Lag, Doppler, Time, Frequency };

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::Lag: return "lag";
    case Axis::Doppler: return "doppler";
    case Axis::Time: return "time";
    case Axis::Frequency: return "frequency";
  }
  return "?";
}

struct AxisGrid {
  Axis axis;
  Vec grid;  // physical coordinate of each row/column
};

// A joint bilinear representation (IAF, AF, WVD, ...) together with its
// axis grids and the transform convention it was produced under.
struct JointRep {
  CMat data;
  AxisGrid row_axis;
  AxisGrid col_axis;
  std::string convention;
};

}  // namespace fhspec

#pragma once

#include "fockprep/experiments.hpp"
#include "fockprep/schedule.hpp"

namespace fockprep::testing {

inline const Preset& mini() {
  static const Preset p = mini_preset(2);
  return p;
}

inline const AdiabaticityProfile& mini_profile(Method m) {
  static const AdiabaticityProfile faquad = design_profile(Method::faquad, mini().path, mini().grid, 2);
  static const AdiabaticityProfile la = design_profile(Method::la, mini().path, mini().grid, 2);
  return m == Method::faquad ? faquad : la;
}

}  // namespace fockprep::testing

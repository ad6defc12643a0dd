#pragma once

#include "wsn/instance.hpp"

namespace wsn {

// Bits one sensor produces for one phenomenon in one period.
double data_volume_bits(const Phenomenon& phenomenon, double period_length_min);

struct LinkEnergy {
  double transmit = 0.0;  // ET_ij^g for one period of one data stream
  double receive = 0.0;   // ER contribution of relaying that stream
};

// Throws std::invalid_argument on a nonpositive period length.
LinkEnergy derive_energy_constants(const DeviceProfile& device,
                                   const Phenomenon& phenomenon,
                                   double period_length_min,
                                   double hop_distance_m);

}  // namespace wsn

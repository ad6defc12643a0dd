#include "wsn/energy.hpp"

#include <stdexcept>

namespace wsn {

double data_volume_bits(const Phenomenon& phenomenon, double period_length_min) {
  if (!(period_length_min > 0.0)) throw std::invalid_argument("period length must be positive");
  return phenomenon.sampling_rate * period_length_min * phenomenon.bits_per_sample;
}

LinkEnergy derive_energy_constants(const DeviceProfile& device, const Phenomenon& phenomenon,
                                   double period_length_min, double hop_distance_m) {
  const double volume = data_volume_bits(phenomenon, period_length_min);
  return {volume * device.transmit.energy_per_bit(hop_distance_m),
          volume * device.receive_energy_per_bit};
}

}  // namespace wsn

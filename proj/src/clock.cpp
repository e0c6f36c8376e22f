#include "szlab/experiments.hpp"

#include <cmath>

namespace szlab {

double tau_of_t(double t)
{
    if (!(t > 0.0))
        throw std::invalid_argument("physical time must be positive to map onto the resonant clock");
    return pi_v<double> * std::log(t);
}

double t_of_tau(double tau)
{
    return std::exp(tau / pi_v<double>);
}

} // namespace szlab

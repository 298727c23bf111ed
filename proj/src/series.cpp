#include "sirs/series.hpp"

namespace sirs {

template class BivariateSeries<HighReal>;
template class BivariateSeries<double>;

}  // namespace sirs

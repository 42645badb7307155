#ifndef WIRETAP2_WIRETAP2_HPP
#define WIRETAP2_WIRETAP2_HPP

#include "wiretap2/audit.hpp"
#include "wiretap2/codec.hpp"
#include "wiretap2/gf.hpp"
#include "wiretap2/lp.hpp"
#include "wiretap2/model.hpp"
#include "wiretap2/pipeline.hpp"
#include "wiretap2/rational.hpp"
#include "wiretap2/region.hpp"
#include "wiretap2/synth.hpp"

#endif  // WIRETAP2_WIRETAP2_HPP

#ifndef BOSS_BOSS_HPP
#define BOSS_BOSS_HPP

#include "boss/bes.hpp"
#include "boss/common.hpp"
#include "boss/graph.hpp"
#include "boss/gst.hpp"
#include "boss/io.hpp"
#include "boss/metrics.hpp"
#include "boss/oracle.hpp"
#include "boss/permutation.hpp"
#include "boss/score.hpp"
#include "boss/search.hpp"
#include "boss/simgen.hpp"

#endif  // BOSS_BOSS_HPP

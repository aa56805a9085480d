#ifndef VIBCLUST_VIBCLUST_HPP
#define VIBCLUST_VIBCLUST_HPP

#include "vibclust/cluster/assignment.hpp"
#include "vibclust/cluster/elbow.hpp"
#include "vibclust/cluster/gmm.hpp"
#include "vibclust/cluster/kmeans.hpp"
#include "vibclust/cluster/optics.hpp"
#include "vibclust/cluster/serialize.hpp"
#include "vibclust/dataio.hpp"
#include "vibclust/error.hpp"
#include "vibclust/eval/grid.hpp"
#include "vibclust/eval/purity.hpp"
#include "vibclust/eval/report.hpp"
#include "vibclust/eval/trial.hpp"
#include "vibclust/features.hpp"
#include "vibclust/linalg.hpp"
#include "vibclust/matrix.hpp"
#include "vibclust/preprocess.hpp"
#include "vibclust/random.hpp"
#include "vibclust/reduce.hpp"
#include "vibclust/spectral.hpp"
#include "vibclust/suite.hpp"

#endif  // VIBCLUST_VIBCLUST_HPP

#pragma once

#include "annoaudit/aggregate.hpp"
#include "annoaudit/classifier.hpp"
#include "annoaudit/entropy.hpp"
#include "annoaudit/error.hpp"
#include "annoaudit/eval.hpp"
#include "annoaudit/filter.hpp"
#include "annoaudit/ingest.hpp"
#include "annoaudit/model.hpp"
#include "annoaudit/parallel.hpp"
#include "annoaudit/report.hpp"
#include "annoaudit/rng.hpp"
#include "annoaudit/silhouette.hpp"
#include "annoaudit/synth.hpp"

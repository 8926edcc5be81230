#pragma once

#include "eapr/classify.hpp"
#include "eapr/config.hpp"
#include "eapr/core.hpp"
#include "eapr/feature_select.hpp"
#include "eapr/footprint.hpp"
#include "eapr/geometry.hpp"
#include "eapr/ingest.hpp"
#include "eapr/pca.hpp"
#include "eapr/pipeline.hpp"
#include "eapr/report.hpp"
#include "eapr/svg.hpp"
#include "eapr/svm.hpp"

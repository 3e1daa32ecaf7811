#pragma once

#include "recaudit/calendar.hpp"
#include "recaudit/cohort.hpp"
#include "recaudit/corpus.hpp"
#include "recaudit/csv.hpp"
#include "recaudit/error.hpp"
#include "recaudit/format.hpp"
#include "recaudit/ingest.hpp"
#include "recaudit/metrics.hpp"
#include "recaudit/ranking.hpp"
#include "recaudit/report.hpp"
#include "recaudit/stats.hpp"
#include "recaudit/validate.hpp"

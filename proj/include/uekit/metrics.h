// Copyright 2026 The uekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Discrimination and calibration quality of a confidence signal.
//
// Discrimination asks whether errors get lower confidence than correct
// predictions (ROC-AUC, with correctness as the positive class, and AU-PRC,
// with errors as the positive class ranked by uncertainty). Calibration asks
// whether confidence matches accuracy (C-Slope, CITL, ECE).
//
// Inputs for which a metric is undefined raise UndefinedError.

#ifndef UEKIT_METRICS_H_
#define UEKIT_METRICS_H_

#include "uekit/core.h"

namespace ue {

// Mann-Whitney estimate of P(conf(correct) > conf(incorrect)), ties 0.5.
double roc_auc(const CorrectnessVector& correct,
               const ConfidenceVector& confidence);

struct AveragePrecision {
  double value = 0.0;
  // True when equal uncertainties occur; their order is the input order.
  bool has_ties = false;
};

// Step-wise average precision over the descending-uncertainty ranking,
// errors as positives.
AveragePrecision au_prc_detailed(const CorrectnessVector& correct,
                                 const ScoreVector& uncertainty);
inline double au_prc(const CorrectnessVector& correct,
                     const ScoreVector& uncertainty) {
  return au_prc_detailed(correct, uncertainty).value;
}

// OLS fit of correctness on confidence: y = intercept + slope * c.
struct CalibrationFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n = 0;
};

CalibrationFit c_slope(const CorrectnessVector& correct,
                       const ConfidenceVector& confidence);

// Mean confidence minus accuracy; positive means overconfident.
double citl(const CorrectnessVector& correct,
            const ConfidenceVector& confidence);

inline constexpr int kDefaultEceBins = 15;

struct BinningConfig {
  int bin_count = kDefaultEceBins;
};

// Equal-width bins [m/M, (m+1)/M), the last one closed at 1.
int ece_bin(double confidence, int bin_count);

double ece(const CorrectnessVector& correct, const ConfidenceVector& confidence,
           const BinningConfig& bins = {});

}  // namespace ue

#endif  // UEKIT_METRICS_H_

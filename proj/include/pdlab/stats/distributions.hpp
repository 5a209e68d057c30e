// Copyright 2026 The pdlab Authors
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

#pragma once

namespace pdlab::stats {

double normal_cdf(double z);
// Upper tails.
double chi2_sf(double x, double df);
double f_sf(double x, double df1, double df2);
// Two-sided p for a t statistic.
double t_two_sided(double t, double df);

// Studentized range distribution of k means with df error degrees of
// freedom (df = infinity allowed). q <= 0 gives 0.
double ptukey(double q, int k, double df);
// Quantile: the q with ptukey(q, k, df) = p, for p in (0, 1).
double qtukey(double p, int k, double df);

}  // namespace pdlab::stats

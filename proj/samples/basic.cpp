/*
 * Copyright 2026 The gridmatch Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Match a random instance with the hybrid pipeline, check it and draw it.

#include <gridmatch/gridmatch.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace gridmatch;
    const int n = 256;
    const Instance inst = random_instance(n, 40, Metric::L2, CenterKind::Real, 7);

    HybridConfig config; // PH_LL after cutoff 0.15
    const HybridResult r = run_hybrid(inst, SortedOffsets(n, Metric::L2), config);
    const Assignment a = r.assignment();

    std::cout << "handoff at " << r.row.handoff_sites << " sites, " << r.row.handoff_centers << " centers\n";
    std::cout << "blocking pairs: " << verify_stability(a, inst).size() << '\n';
    std::cout << "quotas ok: " << std::boolalpha << verify_quotas(a, inst) << '\n';
    render(a, inst.centers(), argc > 1 ? argv[1] : "regions.ppm");
}

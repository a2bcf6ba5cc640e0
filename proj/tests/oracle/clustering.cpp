#include "oracle/clustering.hpp"

#include <algorithm>
#include <limits>

namespace vfmga::oracle {

double spearman_no_ties(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

std::vector<OracleMerge> brute_force_average_linkage(const std::vector<std::vector<double>>& distance) {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < distance.size(); ++i) clusters.push_back({i});
    std::vector<OracleMerge> merges;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double sum = 0.0;
                for (std::size_t p : clusters[i])
                    for (std::size_t q : clusters[j]) sum += distance[p][q];
                const double mean = sum / static_cast<double>(clusters[i].size() * clusters[j].size());
                if (mean < best) best = mean, bi = i, bj = j;
            }
        merges.push_back({clusters[bi], clusters[bj], best});
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return merges;
}

double kendall_no_ties(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t discordant = 0, pairs = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (i == j) continue;
            ++pairs;
            if ((a[i] < a[j]) != (b[i] < b[j])) ++discordant;
        }
    return pairs == 0 ? 0.0 : static_cast<double>(discordant) / static_cast<double>(pairs);
}

}  // namespace vfmga::oracle

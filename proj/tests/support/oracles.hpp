#pragma once

// Reference evaluations written from the defining equations, without the library's
// spatial index, tokenizer or accumulation code.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kRadius = 6371000.0;

// Great-circle distance by the atan2 (Vincenty, sphere) form.
double great_circle(double lat1, double lon1, double lat2, double lon2);

struct LatLon {
    double lat;
    double lon;
};

// (index, meters) of the k nearest points, ascending by distance then index.
std::vector<std::pair<std::size_t, double>> brute_knn(const std::vector<LatLon>& points, LatLon q, std::size_t k);

// sum_i w_i v_i / sum_i w_i over the 50 nearest points, w = ln(1 + 1 / max(d, 0.001)).
std::vector<double> nle_encode(const std::vector<LatLon>& points, const std::vector<std::vector<float>>& vectors,
                               LatLon q);

using Vocab = std::map<std::string, std::vector<float>>;

// Lowercased runs of ASCII letters, digits and non-ASCII bytes.
std::vector<std::string> words(const std::string& text);

// sum over tags of (ft(key) + ft(value)), divided by 2 |tags|; ft is the mean word vector.
std::vector<double> gvtags(const std::map<std::string, std::string>& tags, const Vocab& vocab, std::size_t dim);

}  // namespace oracle

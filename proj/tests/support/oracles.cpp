#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

double great_circle(double lat1, double lon1, double lat2, double lon2) {
    // long double keeps the cancellation in b harmless at sub-meter distances
    const long double rad = std::numbers::pi_v<long double> / 180.0L;
    const long double p1 = lat1 * rad;
    const long double p2 = lat2 * rad;
    const long double dl = (static_cast<long double>(lon2) - lon1) * rad;
    const long double a = std::cos(p2) * std::sin(dl);
    const long double b = std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl);
    const long double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
    return static_cast<double>(kRadius * std::atan2(std::hypot(a, b), c));
}

std::vector<std::pair<std::size_t, double>> brute_knn(const std::vector<LatLon>& points, LatLon q, std::size_t k) {
    std::vector<std::pair<std::size_t, double>> all;
    all.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        all.emplace_back(i, great_circle(q.lat, q.lon, points[i].lat, points[i].lon));
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second < y.second : x.first < y.first;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

std::vector<double> nle_encode(const std::vector<LatLon>& points, const std::vector<std::vector<float>>& vectors,
                               LatLon q) {
    const auto near = brute_knn(points, q, 50);
    const std::size_t dim = vectors.front().size();
    std::vector<long double> sum(dim, 0.0L);
    long double total = 0.0L;
    for (const auto& [i, d] : near) {
        const long double w = std::log1p(1.0L / std::max<long double>(d, 0.001L));
        total += w;
        for (std::size_t j = 0; j < dim; ++j) sum[j] += w * static_cast<long double>(vectors[i][j]);
    }
    std::vector<double> out(dim);
    for (std::size_t j = 0; j < dim; ++j) out[j] = static_cast<double>(sum[j] / total);
    return out;
}

std::vector<std::string> words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
        if (word) {
            cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

namespace {

std::vector<long double> ft(const std::string& text, const Vocab& vocab, std::size_t dim) {
    std::vector<long double> v(dim, 0.0L);
    std::size_t hits = 0;
    for (const auto& w : words(text)) {
        const auto it = vocab.find(w);
        if (it == vocab.end()) continue;
        ++hits;
        for (std::size_t j = 0; j < dim; ++j) v[j] += it->second[j];
    }
    if (hits > 0) {
        for (auto& x : v) x /= static_cast<long double>(hits);
    }
    return v;
}

}  // namespace

std::vector<double> gvtags(const std::map<std::string, std::string>& tags, const Vocab& vocab, std::size_t dim) {
    std::vector<double> out(dim, 0.0);
    if (tags.empty()) return out;
    std::vector<long double> sum(dim, 0.0L);
    for (const auto& [k, v] : tags) {
        const auto a = ft(k, vocab, dim);
        const auto b = ft(v, vocab, dim);
        for (std::size_t j = 0; j < dim; ++j) sum[j] += a[j] + b[j];
    }
    for (std::size_t j = 0; j < dim; ++j) out[j] = static_cast<double>(sum[j] / (2.0L * tags.size()));
    return out;
}

}  // namespace oracle

#include "fractopt/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fractopt/errors.hpp"
#include <json.hpp>

namespace fractopt {

namespace {

constexpr double kSimilarityTolerance = 1e-10;

[[noreturn]] void fail(const std::string& msg) { throw Error("ifs_core", msg); }

}  // namespace

SimilarityMap make_similarity(const Mat& linear, const Vec& translation, int dimension) {
    if (dimension < 1 || dimension > 3) fail("dimension must be 1, 2 or 3");

    // Gram matrix must equal ratio^2 * I on the active block.
    double ratio2 = 0;
    for (int k = 0; k < dimension; ++k) ratio2 += linear.a[k][0] * linear.a[k][0];
    const double ratio = std::sqrt(ratio2);
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j) {
            double g = 0;
            for (int k = 0; k < dimension; ++k) g += linear.a[k][i] * linear.a[k][j];
            const double expected = i == j ? ratio2 : 0.0;
            if (std::abs(g - expected) > kSimilarityTolerance)
                fail("matrix is not a similarity (A^T A deviates from ratio^2 I at (" +
                     std::to_string(i) + "," + std::to_string(j) + "))");
        }
    if (!(ratio > 0.0 && ratio < 1.0))
        fail("contraction ratio " + format_double(ratio) + " is not in (0,1)");

    SimilarityMap map;
    map.linear = linear;
    // Keep the identity padding outside the active block so 3-vector
    // arithmetic stays harmless in lower dimensions.
    for (int i = dimension; i < 3; ++i)
        for (int j = 0; j < 3; ++j) map.linear.a[i][j] = i == j ? 1.0 : 0.0;
    for (int i = 0; i < dimension; ++i)
        for (int j = dimension; j < 3; ++j) map.linear.a[i][j] = 0.0;
    map.translation = translation;
    map.ratio = ratio;

    // Fixed point: (I - A) p = t on the active block; I - A is invertible
    // there since ratio < 1. Gaussian elimination with partial pivoting.
    // The identity padding would make the full 3x3 system singular, so the
    // padded coordinates stay 0 instead.
    double m3[3][4];
    for (int i = 0; i < dimension; ++i) {
        for (int j = 0; j < dimension; ++j) m3[i][j] = (i == j ? 1.0 : 0.0) - linear.a[i][j];
        m3[i][3] = translation[i];
    }
    for (int col = 0; col < dimension; ++col) {
        int pivot = col;
        for (int row = col + 1; row < dimension; ++row)
            if (std::abs(m3[row][col]) > std::abs(m3[pivot][col])) pivot = row;
        std::swap(m3[col], m3[pivot]);
        if (m3[col][col] == 0.0) fail("degenerate map: I - A is singular");
        for (int row = col + 1; row < dimension; ++row) {
            const double f = m3[row][col] / m3[col][col];
            if (f == 0.0) continue;
            for (int j = col; j < 4; ++j) m3[row][j] -= f * m3[col][j];
        }
    }
    Vec p{};
    for (int i = dimension - 1; i >= 0; --i) {
        double s = m3[i][3];
        for (int j = i + 1; j < dimension; ++j) s -= m3[i][j] * p[j];
        p[i] = s / m3[i][i];
    }
    map.fixed_point = p;
    if (distance(map(p), p) > kSimilarityTolerance * (1.0 + norm(p)))
        fail("fixed point computation failed the residual check");
    return map;
}

std::string to_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(static_cast<int>(w.letters[i]));
    }
    return s.empty() ? "()" : s;
}

Vec IfsSystem::boundary_point(int corner) const {
    if (corner < 0 || corner >= boundary_count()) fail("boundary corner out of range");
    return maps[static_cast<std::size_t>(boundary[static_cast<std::size_t>(corner)])].fixed_point;
}

double IfsSystem::v0_diameter() const {
    double d = 0;
    for (int i = 0; i < boundary_count(); ++i)
        for (int j = i + 1; j < boundary_count(); ++j)
            d = std::max(d, distance(boundary_point(i), boundary_point(j)));
    return d;
}

double IfsSystem::max_ratio() const {
    double r = 0;
    for (const auto& m : maps) r = std::max(r, m.ratio);
    return r;
}

void validate_ifs(const IfsSystem& ifs) {
    if (ifs.dimension < 1 || ifs.dimension > 3) fail("dimension must be 1, 2 or 3");
    if (ifs.map_count() < 2) fail("an IFS needs at least 2 maps");
    if (ifs.boundary.empty()) fail("boundary set is empty");
    std::set<int> seen;
    for (int b : ifs.boundary) {
        if (b < 0 || b >= ifs.map_count()) fail("boundary index out of range");
        if (!seen.insert(b).second) fail("boundary indices must be distinct");
    }
    for (const auto& m : ifs.maps)
        if (!(m.ratio > 0.0 && m.ratio < 1.0)) fail("map ratio outside (0,1)");
    if (ifs.v0_diameter() == 0.0) fail("boundary points coincide");
}

Vec apply_word(const IfsSystem& ifs, const Word& w, const Vec& p) {
    Vec q = p;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const int letter = *it;
        if (letter < 0 || letter >= ifs.map_count())
            fail("invalid word: letter " + std::to_string(letter) + " out of range");
        q = ifs.maps[static_cast<std::size_t>(letter)](q);
    }
    return q;
}

double moran_dimension(const IfsSystem& ifs) {
    const auto residual = [&](double s) {
        double sum = 0;
        for (const auto& m : ifs.maps) sum += std::pow(m.ratio, s);
        return sum - 1.0;
    };
    // residual is strictly decreasing from N-1 > 0; bracket then bisect,
    // finishing with Newton steps for the last digits.
    double lo = 1e-12, hi = 1.0;
    while (residual(hi) > 0) hi *= 2;
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        double f = 0, df = 0;
        for (const auto& m : ifs.maps) {
            const double t = std::pow(m.ratio, s);
            f += t;
            df += t * std::log(m.ratio);
        }
        s -= (f - 1.0) / df;
    }
    if (std::abs(residual(s)) > 1e-12) fail("Moran equation solve did not reach tolerance");
    return s;
}

std::vector<double> measure_weights(const IfsSystem& ifs) {
    const double dh = moran_dimension(ifs);
    std::vector<double> mu;
    mu.reserve(ifs.maps.size());
    for (const auto& m : ifs.maps) mu.push_back(std::pow(m.ratio, dh));
    return mu;
}

double cell_measure(const IfsSystem& ifs, const Word& w) {
    const auto mu = measure_weights(ifs);
    double product = 1.0;
    for (int letter : w.letters) {
        if (letter < 0 || letter >= ifs.map_count()) fail("invalid word letter in cell_measure");
        product *= mu[static_cast<std::size_t>(letter)];
    }
    return product;
}

Word word_successor(const IfsSystem& ifs, const Word& w) {
    const int n = ifs.map_count();
    Word out = w;
    for (auto it = out.letters.rbegin(); it != out.letters.rend(); ++it) {
        if (*it + 1 < n) {
            ++*it;
            return out;
        }
        *it = 0;
    }
    fail("word " + to_string(w) + " is the last of its length; no successor");
}

Word word_predecessor(const IfsSystem& ifs, const Word& w) {
    const int n = ifs.map_count();
    Word out = w;
    for (auto it = out.letters.rbegin(); it != out.letters.rend(); ++it) {
        if (*it > 0) {
            --*it;
            return out;
        }
        *it = static_cast<std::uint8_t>(n - 1);
    }
    fail("word " + to_string(w) + " is the first of its length; no predecessor");
}

IfsSystem parse_ifs_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("top-level JSON value must be an object");
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
        fail("missing integer field \"dimension\"");
    if (!doc.contains("maps") || !doc["maps"].is_array() || doc["maps"].empty())
        fail("missing non-empty array field \"maps\"");

    IfsSystem ifs;
    ifs.dimension = doc["dimension"].get<int>();
    if (ifs.dimension < 1 || ifs.dimension > 3) fail("\"dimension\" must be 1, 2 or 3");

    for (const auto& jm : doc["maps"]) {
        if (!jm.is_object() || !jm.contains("matrix") || !jm.contains("translation"))
            fail("every map needs \"matrix\" and \"translation\"");
        const auto& jmat = jm["matrix"];
        const auto& jtr = jm["translation"];
        const auto d = static_cast<std::size_t>(ifs.dimension);
        if (!jmat.is_array() || jmat.size() != d) fail("\"matrix\" must be a dxd array");
        Mat linear;
        for (std::size_t i = 0; i < d; ++i) {
            if (!jmat[i].is_array() || jmat[i].size() != d) fail("\"matrix\" must be a dxd array");
            for (std::size_t j = 0; j < d; ++j) {
                if (!jmat[i][j].is_number()) fail("matrix entries must be numbers");
                linear.a[i][j] = jmat[i][j].get<double>();
            }
        }
        if (!jtr.is_array() || jtr.size() != d) fail("\"translation\" must have d entries");
        Vec translation{};
        for (std::size_t i = 0; i < d; ++i) {
            if (!jtr[i].is_number()) fail("translation entries must be numbers");
            translation[i] = jtr[i].get<double>();
        }
        ifs.maps.push_back(make_similarity(linear, translation, ifs.dimension));
    }

    if (doc.contains("boundary")) {
        if (!doc["boundary"].is_array() || doc["boundary"].empty())
            fail("\"boundary\" must be a non-empty array of map indices");
        for (const auto& jb : doc["boundary"]) {
            if (!jb.is_number_integer()) fail("boundary entries must be integers");
            ifs.boundary.push_back(jb.get<int>());
        }
    } else {
        for (int i = 0; i < ifs.map_count(); ++i) ifs.boundary.push_back(i);
    }
    ifs.closed_boundary = doc.value("closed", true);

    validate_ifs(ifs);
    return ifs;
}

}  // namespace fractopt

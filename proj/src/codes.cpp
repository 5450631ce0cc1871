#include "pirsq/codes.hpp"

#include <algorithm>

#include "pirsq/combin.hpp"

namespace pirsq {

using detail::mod_mul;

void GrsSpec::validate() const {
    detail::require_prime_modulus(modulus);
    if (k == 0 || k > n() || n() > modulus)
        throw Error("invalid_params", "GRS needs 1 <= k <= n <= q");
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] >= modulus) throw Error("invalid_params", "GRS evaluation point out of range");
        for (std::size_t j = i + 1; j < alpha.size(); ++j)
            if (alpha[i] == alpha[j]) throw Error("duplicate_nodes", "GRS evaluation points must be distinct");
    }
    if (mult.size() != alpha.size()) throw Error("invalid_params", "GRS multiplier count mismatch");
    for (std::uint32_t v : mult)
        if (v % modulus == 0) throw Error("invalid_params", "GRS multipliers must be nonzero");
}

GrsSpec GrsSpec::standard(std::size_t n, std::size_t k, std::uint32_t modulus) {
    GrsSpec s;
    s.modulus = modulus;
    s.k = k;
    s.alpha.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.alpha[j] = static_cast<std::uint32_t>(j);
    s.mult.assign(n, 1);
    s.validate();
    return s;
}

Matrix grs_generator(const GrsSpec& spec) {
    spec.validate();
    Matrix m = vandermonde(spec.alpha, spec.k, spec.modulus);
    for (std::size_t j = 0; j < spec.n(); ++j) {
        std::uint32_t v = spec.mult[j] % spec.modulus;
        if (v == 1) continue;
        for (std::size_t i = 0; i < spec.k; ++i) m.set(i, j, mod_mul(m.get(i, j), v, spec.modulus));
    }
    return m;
}

StorageCode StorageCode::from_grs(const GrsSpec& spec) {
    StorageCode c;
    c.n = spec.n();
    c.k = spec.k;
    c.generator = grs_generator(spec);
    c.flavor = CodeFlavor::Grs;
    c.grs = spec;
    return c;
}

StorageCode StorageCode::generic(std::size_t n, std::size_t k, std::uint32_t modulus, Rng& rng) {
    if (k == 0 || k > n) throw Error("invalid_params", "generic code needs 1 <= k <= n");
    StorageCode c;
    c.n = n;
    c.k = k;
    c.flavor = CodeFlavor::GenericMds;

    // First candidate: [I_K A] with A(i, j) = (i+1)^j, the smallest
    // systematic completion that is MDS at desk-scale parameters.
    Matrix g(k, n, modulus);
    for (std::size_t i = 0; i < k; ++i) g.set(i, i, 1);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t p = 1 % modulus;
        for (std::size_t j = k; j < n; ++j) {
            g.set(i, j, p);
            p = mod_mul(p, static_cast<std::uint32_t>((i + 1) % modulus), modulus);
        }
    }
    if (is_column_mds(g, k)) {
        c.generator = g;
        return c;
    }
    for (std::size_t attempt = 0; attempt < 1000; ++attempt) {
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = k; j < n; ++j) g.set(i, j, rng.field_value(modulus));
        if (is_column_mds(g, k)) {
            c.generator = g;
            return c;
        }
    }
    throw Error("field_too_small", "no (n, k) MDS systematic completion found over F_q");
}

Matrix StorageCode::column(std::size_t server) const { return generator.columns_subset({server}); }

Matrix to_systematic(const Matrix& g) {
    if (!is_column_mds(g, g.rows())) throw Error("invalid_params", "to_systematic requires a column-MDS input");
    return rref(g).matrix;
}

std::size_t schur_product_dim(const Matrix& g1, const Matrix& g2) {
    if (g1.cols() != g2.cols() || g1.modulus() != g2.modulus())
        throw Error("dimension_mismatch", "schur product: column count or modulus mismatch");
    const std::uint32_t q = g1.modulus();
    Matrix prod(g1.rows() * g2.rows(), g1.cols(), q);
    for (std::size_t i = 0; i < g1.rows(); ++i)
        for (std::size_t j = 0; j < g2.rows(); ++j)
            for (std::size_t c = 0; c < g1.cols(); ++c)
                prod.set(i * g2.rows() + j, c, mod_mul(g1.get(i, c), g2.get(j, c), q));
    return rank(prod);
}

Matrix build_row_spread_generic(const Matrix& g_sys, std::size_t t, Rng& rng, std::size_t max_retries) {
    const std::size_t k = g_sys.rows();
    const std::size_t n = g_sys.cols();
    const std::uint32_t q = g_sys.modulus();
    if (n < k + t) throw Error("invalid_params", "row spread needs n >= k + t");
    if (!is_column_mds(g_sys, k)) throw Error("invalid_params", "row spread needs a column-MDS code");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (g_sys.get(i, j) != (i == j ? 1u : 0u))
                throw Error("invalid_params", "row spread needs the systematic form [I_K A]");

    const std::size_t free_rows = n - k - t;
    Matrix h(n, t, q);
    for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
        // bottom block: free entries (empty when k == n - t, making the
        // construction deterministic)
        for (std::size_t r = 0; r < free_rows; ++r)
            for (std::size_t c = 0; c < t; ++c) h.set(k + t + r, c, rng.field_value(q));
        // middle block: identity
        for (std::size_t r = 0; r < t; ++r)
            for (std::size_t c = 0; c < t; ++c) h.set(k + r, c, r == c ? 1 : 0);
        // top block tied to the code: row i, col c gets
        // g(i, k+c) + sum_l g(i, k+t+l) * h(k+t+l, c)
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t c = 0; c < t; ++c) {
                std::uint64_t acc = g_sys.get(i, k + c);
                for (std::size_t l = 0; l < free_rows; ++l)
                    acc += static_cast<std::uint64_t>(mod_mul(g_sys.get(i, k + t + l), h.get(k + t + l, c), q));
                h.set(i, c, acc % q);
            }
        }
        if (is_row_mds(h, t)) return h;
        if (free_rows == 0) break;  // nothing to resample
    }
    throw Error("retries_exhausted", "no row-MDS spread matrix found; raise the field size");
}

Matrix build_row_spread_grs(const GrsSpec& spec, std::size_t t) {
    spec.validate();
    if (t > spec.n()) throw Error("invalid_params", "row spread wider than the code length");
    return vandermonde(spec.alpha, t, spec.modulus).transpose();
}

Matrix wedge_coordinates(const Matrix& vectors) {
    const std::size_t tp = vectors.rows();
    const std::size_t t = vectors.cols();
    if (tp > t) throw Error("dimension_mismatch", "wedge of more vectors than the ambient dimension");
    auto subsets = k_subsets(t, tp);
    Matrix out(1, subsets.size(), vectors.modulus());
    for (std::size_t s = 0; s < subsets.size(); ++s)
        out.set(0, s, determinant(vectors.columns_subset(subsets[s])).value());
    return out;
}

namespace {

// moment curve point (1, x, x^2, ..., x^(t-1)) as a row vector
Matrix moment_point(std::size_t t, std::uint32_t x, std::uint32_t q) {
    Matrix m(1, t, q);
    std::uint32_t p = 1 % q;
    for (std::size_t i = 0; i < t; ++i) {
        m.set(0, i, p);
        p = mod_mul(p, x % q, q);
    }
    return m;
}

Matrix infinity_point(std::size_t t, std::uint32_t q) {
    Matrix m(1, t, q);
    m.set(0, t - 1, 1);
    return m;
}

}  // namespace

namespace {

std::vector<Subspace> wedge_subspaces_for(std::size_t t, std::size_t t_prime, std::uint32_t modulus,
                                          const std::vector<Matrix>& points) {
    const std::uint64_t wdim = binomial(t, static_cast<std::int64_t>(t_prime));
    auto gens = k_subsets(t, t_prime - 1);
    std::vector<Subspace> out;
    out.reserve(points.size());
    for (const auto& u : points) {
        // span of u ^ e_{j_1} ^ ... ^ e_{j_{t'-1}} over all index choices
        Matrix rows(gens.size(), static_cast<std::size_t>(wdim), modulus);
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            Matrix stacked(t_prime, t, modulus);
            stacked.set_row(0, u);
            for (std::size_t r = 1; r < t_prime; ++r) stacked.set(r, gens[gi][r - 1], 1);
            rows.set_row(gi, wedge_coordinates(stacked));
        }
        out.push_back(Subspace::from_rows(rows));
    }
    return out;
}

Matrix stack_bases(const std::vector<Subspace>& spaces, std::size_t block, std::size_t wdim,
                   std::uint32_t modulus) {
    Matrix out(block * spaces.size(), wdim, modulus);
    for (std::size_t s = 0; s < spaces.size(); ++s) {
        if (spaces[s].dim() != block)
            throw Error("dimension_mismatch", "exterior subspace has unexpected dimension");
        for (std::size_t r = 0; r < block; ++r) out.set_row(s * block + r, spaces[s].basis().row(r));
    }
    return out;
}

}  // namespace

std::vector<Subspace> exterior_subspaces(std::size_t t, std::size_t t_prime, std::uint32_t modulus,
                                         std::size_t count) {
    if (t_prime < 2 || t_prime >= t) throw Error("invalid_params", "exterior subspaces need 2 <= t' < t");
    if (count > static_cast<std::size_t>(modulus) + 1)
        throw Error("field_too_small", "at most q + 1 exterior subspaces exist");
    std::vector<Matrix> points;
    for (std::size_t i = 0; i < count && i < modulus; ++i)
        points.push_back(moment_point(t, static_cast<std::uint32_t>(i), modulus));
    if (points.size() < count) points.push_back(infinity_point(t, modulus));
    return wedge_subspaces_for(t, t_prime, modulus, points);
}

std::vector<Subspace> exterior_subspaces_at(std::size_t t, std::size_t t_prime, std::uint32_t modulus,
                                            const std::vector<std::uint32_t>& curve_points) {
    if (t_prime < 2 || t_prime >= t) throw Error("invalid_params", "exterior subspaces need 2 <= t' < t");
    for (std::size_t i = 0; i < curve_points.size(); ++i)
        for (std::size_t j = i + 1; j < curve_points.size(); ++j)
            if (curve_points[i] % modulus == curve_points[j] % modulus)
                throw Error("duplicate_nodes", "curve parameters must be distinct");
    std::vector<Matrix> points;
    points.reserve(curve_points.size());
    for (std::uint32_t x : curve_points) points.push_back(moment_point(t, x, modulus));
    return wedge_subspaces_for(t, t_prime, modulus, points);
}

Matrix build_wedge_spread(std::size_t n_servers, std::size_t t, std::size_t t_prime, std::uint32_t modulus) {
    if (static_cast<std::uint64_t>(modulus) + 1 < n_servers)
        throw Error("field_too_small", "wedge spread needs q + 1 >= n");
    auto spaces = exterior_subspaces(t, t_prime, modulus, n_servers);
    const std::size_t block = static_cast<std::size_t>(binomial(t - 1, static_cast<std::int64_t>(t_prime) - 1));
    const std::size_t wdim = static_cast<std::size_t>(binomial(t, static_cast<std::int64_t>(t_prime)));
    return stack_bases(spaces, block, wdim, modulus);
}

Matrix build_wedge_spread_at(std::size_t t, std::size_t t_prime, std::uint32_t modulus,
                             const std::vector<std::uint32_t>& curve_points) {
    auto spaces = exterior_subspaces_at(t, t_prime, modulus, curve_points);
    const std::size_t block = static_cast<std::size_t>(binomial(t - 1, static_cast<std::int64_t>(t_prime) - 1));
    const std::size_t wdim = static_cast<std::size_t>(binomial(t, static_cast<std::int64_t>(t_prime)));
    return stack_bases(spaces, block, wdim, modulus);
}

}  // namespace pirsq

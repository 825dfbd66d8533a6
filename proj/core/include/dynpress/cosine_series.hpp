#pragma once

// Even (cosine) series on the half period [0, Λ] sampled at the cell-centred
// nodes ξ_j = (j + 1/2) Λ / n. Coefficients a_k multiply cos(k π ξ / Λ),
// k = 0 .. n-1. Backed by FFTW's REDFT10/REDFT01/RODFT01 transforms.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dynpress {

class CosineTransform {
public:
    explicit CosineTransform(std::size_t n);
    ~CosineTransform();
    CosineTransform(CosineTransform&&) noexcept;
    CosineTransform& operator=(CosineTransform&&) noexcept;
    CosineTransform(const CosineTransform&) = delete;
    CosineTransform& operator=(const CosineTransform&) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// Nodal values of Σ a_k cos(k π ξ_j / Λ).
    [[nodiscard]] std::vector<double> synthesize(std::span<const double> coefficients) const;

    /// Inverse of synthesize.
    [[nodiscard]] std::vector<double> analyze(std::span<const double> nodal) const;

    /// Nodal values of Σ_{k>=1} b_k sin(k π ξ_j / Λ); b_0 is ignored.
    [[nodiscard]] std::vector<double> synthesize_sine(std::span<const double> coefficients) const;

private:
    struct Plans;
    std::size_t n_;
    std::unique_ptr<Plans> plans_;
};

/// Cell-centred collocation nodes for a half period Λ.
[[nodiscard]] std::vector<double> cosine_nodes(std::size_t n, double half_length);

/// Wavenumbers k π / Λ.
[[nodiscard]] std::vector<double> cosine_wavenumbers(std::size_t n, double half_length);

} // namespace dynpress

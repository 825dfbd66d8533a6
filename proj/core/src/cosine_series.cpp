#include "dynpress/cosine_series.hpp"

#include "dynpress/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dynpress {

namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    double* data;
};

} // namespace

struct CosineTransform::Plans {
    explicit Plans(std::size_t n) : in(n), out(n) {
        const int m = static_cast<int>(n);
        // FFTW_ESTIMATE keeps planning deterministic and leaves the buffers untouched.
        forward = fftw_plan_r2r_1d(m, in.data, out.data, FFTW_REDFT10, FFTW_ESTIMATE);
        inverse = fftw_plan_r2r_1d(m, in.data, out.data, FFTW_REDFT01, FFTW_ESTIMATE);
        sine = fftw_plan_r2r_1d(m, in.data, out.data, FFTW_RODFT01, FFTW_ESTIMATE);
        if (forward == nullptr || inverse == nullptr || sine == nullptr)
            throw Error(ErrorCode::InvalidInput, "FFTW planning failed");
    }
    ~Plans() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
        fftw_destroy_plan(sine);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;

    FftwBuffer in;
    FftwBuffer out;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    fftw_plan sine = nullptr;
};

CosineTransform::CosineTransform(std::size_t n) : n_(n) {
    if (n < 2) throw Error(ErrorCode::InvalidInput, "cosine transform needs at least 2 nodes");
    plans_ = std::make_unique<Plans>(n);
}

CosineTransform::~CosineTransform() = default;
CosineTransform::CosineTransform(CosineTransform&&) noexcept = default;
CosineTransform& CosineTransform::operator=(CosineTransform&&) noexcept = default;

std::vector<double> CosineTransform::synthesize(std::span<const double> coefficients) const {
    if (coefficients.size() != n_) throw Error(ErrorCode::InvalidInput, "coefficient count mismatch");
    double* in = plans_->in.data;
    in[0] = coefficients[0];
    for (std::size_t k = 1; k < n_; ++k) in[k] = 0.5 * coefficients[k];
    fftw_execute(plans_->inverse);
    return {plans_->out.data, plans_->out.data + n_};
}

std::vector<double> CosineTransform::analyze(std::span<const double> nodal) const {
    if (nodal.size() != n_) throw Error(ErrorCode::InvalidInput, "nodal count mismatch");
    std::copy(nodal.begin(), nodal.end(), plans_->in.data);
    fftw_execute(plans_->forward);
    std::vector<double> result(plans_->out.data, plans_->out.data + n_);
    const double scale = 1.0 / static_cast<double>(n_);
    result[0] *= 0.5 * scale;
    for (std::size_t k = 1; k < n_; ++k) result[k] *= scale;
    return result;
}

std::vector<double> CosineTransform::synthesize_sine(std::span<const double> coefficients) const {
    if (coefficients.size() != n_) throw Error(ErrorCode::InvalidInput, "coefficient count mismatch");
    // RODFT01 input slot j carries mode j + 1; mode n (slot n-1) is not doubled.
    double* in = plans_->in.data;
    for (std::size_t j = 0; j + 1 < n_; ++j) in[j] = 0.5 * coefficients[j + 1];
    in[n_ - 1] = 0.0;
    fftw_execute(plans_->sine);
    return {plans_->out.data, plans_->out.data + n_};
}

std::vector<double> cosine_nodes(std::size_t n, double half_length) {
    std::vector<double> xi(n);
    for (std::size_t j = 0; j < n; ++j)
        xi[j] = (static_cast<double>(j) + 0.5) * half_length / static_cast<double>(n);
    return xi;
}

std::vector<double> cosine_wavenumbers(std::size_t n, double half_length) {
    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j)
        k[j] = static_cast<double>(j) * std::numbers::pi / half_length;
    return k;
}

} // namespace dynpress

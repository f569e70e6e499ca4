#include "zetaforge/precision.hpp"

#include "zetaforge/errors.hpp"

#include <cmath>

namespace zetaforge {

PrecisionContext PrecisionContext::from_digits(unsigned digits, unsigned guard_bits)
{
    if (digits == 0)
        throw DomainError("precision must be at least one decimal digit");
    PrecisionContext ctx;
    ctx.target_digits_ = digits;
    ctx.working_bits_ = static_cast<unsigned>(std::ceil(digits * 3.3219280948873623)) + guard_bits;
    ScopedPrecision guard(ctx.working_bits_);
    ctx.target_eps_ = pow(BigReal(10), -static_cast<int>(digits));
    ctx.series_tail_eps_ = ctx.target_eps_ / 16;
    ctx.quad_line_c_ = BigReal(2);
    ctx.dirichlet_margin_ = BigReal(1) / 8;
    ctx.validate();
    return ctx;
}

PrecisionContext PrecisionContext::with_line_c(const BigReal& c) const
{
    PrecisionContext r = *this;
    ScopedPrecision guard(working_bits_);
    r.quad_line_c_ = c;
    r.validate();
    return r;
}

PrecisionContext PrecisionContext::with_height(const BigReal& t) const
{
    PrecisionContext r = *this;
    ScopedPrecision guard(working_bits_);
    r.quad_height_T_ = t;
    r.validate();
    return r;
}

PrecisionContext PrecisionContext::with_nodes(unsigned n) const
{
    PrecisionContext r = *this;
    r.quad_nodes_ = n;
    r.validate();
    return r;
}

PrecisionContext PrecisionContext::with_series_tail_eps(const BigReal& eps) const
{
    PrecisionContext r = *this;
    ScopedPrecision guard(working_bits_);
    r.series_tail_eps_ = eps;
    r.validate();
    return r;
}

PrecisionContext PrecisionContext::with_max_general_degree(unsigned d) const
{
    PrecisionContext r = *this;
    r.max_general_degree_ = d;
    return r;
}

PrecisionContext PrecisionContext::with_workers(unsigned n) const
{
    PrecisionContext r = *this;
    r.worker_count_ = n == 0 ? 1 : n;
    return r;
}

void PrecisionContext::validate() const
{
    ScopedPrecision guard(working_bits_);
    if (!(target_eps_ > 0) || !(series_tail_eps_ > 0))
        throw DomainError("target_eps and series_tail_eps must be positive");
    if (target_eps_ < pow2(-static_cast<long>(working_bits_) + 8))
        throw DomainError("working precision of " + std::to_string(working_bits_) +
                          " bits cannot support the requested target_eps");
    if (!(quad_line_c_ > 1))
        throw DomainError("contour abscissa must exceed 1");
    BigReal c_half = quad_line_c_ / 2;
    if (abs(cos(const_pi() * c_half)) <= BigReal(1) / 20)
        throw DomainError("contour abscissa too close to an odd integer (|cos(pi c/2)| <= 0.05)");
    if (quad_height_T_ && !(*quad_height_T_ > 0))
        throw DomainError("contour height must be positive");
    if (quad_nodes_ < 64)
        throw DomainError("quadrature needs at least 64 nodes");
}

}  // namespace zetaforge

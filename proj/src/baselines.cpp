#include "secrecy/baselines.hpp"

namespace secrecy
{

namespace
{

CMatrix h_projector(const CVector& h)
{
    return hermitian_part(h * h.adjoint() / h.squaredNorm());
}

} // namespace

TransmitDesign isotropic_an(const ProblemInstance& instance)
{
    validate(instance);
    const int n = instance.nt();
    if (n < 2)
        throw Error(Errc::requires_multiple_antennas, "isotropic_an: the orthogonal complement of h is empty");
    const CMatrix Ph = h_projector(instance.h);
    const double half = 0.5 * instance.power;
    TransmitDesign d;
    d.W = half * Ph;
    d.Sigma = hermitian_part((half / (n - 1)) * (CMatrix::Identity(n, n) - Ph));
    d.beam = std::sqrt(half) * instance.h / instance.h.norm();
    return d;
}

TransmitDesign no_an_mrt(const ProblemInstance& instance)
{
    validate(instance);
    const int n = instance.nt();
    TransmitDesign d;
    d.W = instance.power * h_projector(instance.h);
    d.Sigma = CMatrix::Zero(n, n);
    d.beam = std::sqrt(instance.power) * instance.h / instance.h.norm();
    return d;
}

} // namespace secrecy

#include "qw/ordinal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qw/counting.hpp"
#include "qw/error.hpp"

namespace qw {

FiniteOrdinalSet::FiniteOrdinalSet(std::vector<std::size_t> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

OrderType order_type(const FiniteOrdinalSet& s) {
    return OrderType{s.size(), s.values()};
}

std::size_t aleph(const Polynomial& poly) { return poly.max_arity() + 1; }

namespace {

__extension__ typedef unsigned __int128 u128;

u128 triangle(u128 w) { return w * (w + 1) / 2; }

}  // namespace

std::uint64_t cantor_pair(std::uint64_t m, std::uint64_t n) {
    const u128 s = u128{m} + n;
    const u128 p = triangle(s) + n;
    if (p > UINT64_MAX) raise(Errc::InvalidInput, "cantor_pair overflows 64 bits");
    return static_cast<std::uint64_t>(p);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t p) {
    // w = largest with w(w+1)/2 <= p
    auto w = static_cast<u128>(std::sqrt(2.0L * static_cast<long double>(p)));
    while (triangle(w) > p) --w;
    while (triangle(w + 1) <= p) ++w;
    const auto n = static_cast<std::uint64_t>(u128{p} - triangle(w));
    const auto m = static_cast<std::uint64_t>(w - n);
    return {m, n};
}

std::uint64_t omega_tuple_code(std::span<const std::uint64_t> xs) {
    if (xs.empty()) raise(Errc::InvalidInput, "omega_tuple_code needs a nonempty sequence");
    std::uint64_t acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = cantor_pair(acc, xs[i]);
    return cantor_pair(xs.size() - 1, acc);
}

std::vector<std::uint64_t> omega_tuple_decode(std::uint64_t code) {
    auto [lengthMinusOne, acc] = cantor_unpair(code);
    std::vector<std::uint64_t> xs(lengthMinusOne + 1);
    for (std::size_t i = lengthMinusOne; i > 0; --i) {
        auto [rest, last] = cantor_unpair(acc);
        xs[i] = last;
        acc = rest;
    }
    xs[0] = acc;
    return xs;
}

std::size_t SurjectionTable::at(std::span<const std::size_t> betas) const {
    if (betas.size() != n) raise(Errc::InvalidInput, "tuple length differs from n");
    for (std::size_t b : betas)
        if (b >= kappa) raise(Errc::InvalidInput, "coordinate out of kappa");
    return values[encode_digits<std::size_t>(betas, kappa)];
}

std::vector<std::size_t> SurjectionTable::image() const {
    std::vector<std::size_t> out = values;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// G : kappa ->> Y u {0}: theta on the order type of Y, 0 beyond it.
void order_type_surjection(const std::vector<std::size_t>& y, std::size_t kappa, std::size_t* row) {
    const OrderType ot = order_type(FiniteOrdinalSet(y));
    if (ot.beta >= kappa)
        raise(Errc::Internal, "order type not below kappa");
    for (std::size_t alpha = 0; alpha < kappa; ++alpha) row[alpha] = alpha < ot.beta ? ot.theta[alpha] : 0;
}

class SurjectionBuilder {
public:
    SurjectionBuilder(const StageFamily& sf, bool viaRepresentative, std::uint64_t cap)
        : sf_(sf), kappa_(aleph(sf.poly())), viaRep_(viaRepresentative), cap_(cap) {}

    std::size_t kappa() const { return kappa_; }

    const std::vector<std::size_t>& table(ClassId x, std::size_t n) {
        if (auto it = memo_.find({x, n}); it != memo_.end()) return it->second;
        auto size = bounded_pow(kappa_, n, cap_);
        if (!size) raise(Errc::CapExceeded, "kappa^n exceeds cap " + std::to_string(cap_));
        std::vector<std::size_t> values(*size);

        std::vector<ClassId> children;
        if (viaRep_) {
            const auto& rep = sf_.representative(x).children;
            children.assign(rep.begin(), rep.end());
        } else {
            auto im = sf_.image(x);
            children.assign(im.begin(), im.end());
        }

        if (n == 1) {
            std::vector<std::size_t> r1;
            for (ClassId c : children) r1.push_back(sf_.rank(c));
            order_type_surjection(r1, kappa_, values.data());
        } else {
            std::vector<const std::vector<std::size_t>*> sub;
            for (ClassId c : children) sub.push_back(&table(c, n - 1));
            const std::size_t prefixes = values.size() / kappa_;
            std::vector<std::size_t> y;
            for (std::size_t p = 0; p < prefixes; ++p) {
                y.clear();
                for (const auto* t : sub) y.push_back((*t)[p]);
                order_type_surjection(y, kappa_, values.data() + p * kappa_);
            }
        }
        return memo_.emplace(std::make_pair(x, n), std::move(values)).first->second;
    }

private:
    const StageFamily& sf_;
    std::size_t kappa_;
    bool viaRep_;
    std::uint64_t cap_;
    std::map<std::pair<ClassId, std::size_t>, std::vector<std::size_t>> memo_;
};

SurjectionTable build_table(const StageFamily& sf, ClassId x, std::size_t n, bool viaRep, std::uint64_t cap) {
    if (n == 0) raise(Errc::InvalidInput, "F_{x,n} is defined for n >= 1");
    if (x >= sf.size()) raise(Errc::InvalidInput, "class id out of range");
    SurjectionBuilder b(sf, viaRep, cap);
    SurjectionTable t;
    t.kappa = b.kappa();
    t.n = n;
    t.values = b.table(x, n);
    return t;
}

}  // namespace

SurjectionTable f_surjection(const StageFamily& sf, ClassId x, std::size_t n, std::uint64_t cap) {
    return build_table(sf, x, n, false, cap);
}

SurjectionTable f_surjection_via_representative(const StageFamily& sf, ClassId x, std::size_t n,
                                                std::uint64_t cap) {
    return build_table(sf, x, n, true, cap);
}

}  // namespace qw

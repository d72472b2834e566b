#include "widesense.hpp"

#include <algorithm>

namespace ultrext {

namespace {

std::size_t pow_size(std::size_t base, std::size_t exp, std::size_t cap) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        out *= base;
        if (out > cap) throw std::invalid_argument("carrier too large to enumerate");
    }
    return out;
}

}  // namespace

FunctionCarrier::FunctionCarrier(UniversePtr universe, std::size_t arity)
    : universe_(std::move(universe)), arity_(arity) {
    if (!universe_) throw std::invalid_argument("function carrier needs a universe");
    domain_size_ = finite_table_size(*universe_, arity_);
    size_ = pow_size(universe_->size(), domain_size_, max_size);
}

DefOp FunctionCarrier::element(std::size_t index) const {
    std::vector<Int> table(domain_size_);
    for (std::size_t i = domain_size_; i > 0; --i) {
        table[i - 1] = Int(index % universe_->size());
        index /= universe_->size();
    }
    return DefOp::finite(universe_, arity_, std::move(table));
}

std::size_t FunctionCarrier::index_of(const DefOp& op) const {
    std::size_t index = 0;
    for (const auto& v : op.table())
        index = index * universe_->size() + static_cast<std::size_t>(v.convert_to<long>());
    return index;
}

std::string FunctionCarrier::label(std::size_t index) const {
    auto op = element(index);
    std::string out = "[";
    for (std::size_t i = 0; i < op.table().size(); ++i) {
        if (i) out += ",";
        out += universe_->label(static_cast<std::size_t>(op.table()[i].convert_to<long>()));
    }
    return out + "]";
}

RelationCarrier::RelationCarrier(UniversePtr universe, std::size_t arity)
    : universe_(std::move(universe)), arity_(arity) {
    if (!universe_) throw std::invalid_argument("relation carrier needs a universe");
    domain_size_ = finite_table_size(*universe_, arity_);
    size_ = pow_size(2, domain_size_, max_size);
}

DefinableSet RelationCarrier::element(std::size_t index) const {
    std::vector<bool> table(domain_size_);
    for (std::size_t i = domain_size_; i > 0; --i) {
        table[i - 1] = index & 1;
        index >>= 1;
    }
    return DefinableSet::finite(universe_, arity_, std::move(table));
}

std::size_t RelationCarrier::index_of(const DefinableSet& set) const {
    std::size_t index = 0;
    for (bool b : set.table()) index = (index << 1) | (b ? 1 : 0);
    return index;
}

std::string RelationCarrier::label(std::size_t index) const {
    auto set = element(index);
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < set.table().size(); ++i) {
        if (!set.table()[i]) continue;
        if (!first) out += ",";
        first = false;
        auto point = finite_point(*universe_, arity_, i);
        out += "(";
        for (std::size_t j = 0; j < point.size(); ++j) {
            if (j) out += " ";
            out += universe_->label(static_cast<std::size_t>(point[j].convert_to<long>()));
        }
        out += ")";
    }
    return out + "}";
}

bool LiftedUF::concentrated_on(const std::vector<std::size_t>& subset) const {
    return std::binary_search(subset.begin(), subset.end(), element);
}

LiftedUF lift(const FiniteUltrafilter& point, std::span<const std::size_t> injection,
              std::size_t target_size) {
    if (injection.size() != point.carrier_size)
        throw std::invalid_argument("injection must cover the source carrier");
    LiftedUF out;
    out.carrier_size = target_size;
    out.element = injection[point.element];
    out.concentration.assign(injection.begin(), injection.end());
    std::sort(out.concentration.begin(), out.concentration.end());
    if (out.element >= target_size) throw std::invalid_argument("injection leaves the target carrier");
    return out;
}

FiniteUltrafilter project(const LiftedUF& point, std::span<const std::size_t> injection) {
    for (std::size_t i = 0; i < injection.size(); ++i) {
        if (injection[i] == point.element) return FiniteUltrafilter{injection.size(), i};
    }
    throw std::invalid_argument("projection needs the subset to belong to the ultrafilter");
}

namespace {

// Table of the extension of a finite operation, computed through the generic
// engine at principal points. Over a finite universe this reproduces the
// operation itself; computing it exercises the plumbing that the theorems
// are about.
DefOp extension_table(const DefOp& op) {
    const auto& u = *op.universe();
    std::size_t n = finite_table_size(u, op.arity());
    std::vector<Int> table(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        auto point = finite_point(u, op.arity(), idx);
        std::vector<UPoint> args;
        for (const auto& c : point) args.push_back(UPoint::principal_finite(op.universe(), c));
        table[idx] = ext_map(op, args).value();
    }
    return DefOp::finite(op.universe(), op.arity(), std::move(table));
}

DefinableSet closure_table(const DefinableSet& set) {
    const auto& u = *set.universe();
    std::size_t n = finite_table_size(u, set.arity());
    std::vector<bool> table(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        auto point = finite_point(u, set.arity(), idx);
        std::vector<UPoint> args;
        for (const auto& c : point) args.push_back(UPoint::principal_finite(set.universe(), c));
        table[idx] = ext_rel_star(set, args);
    }
    return DefinableSet::finite(set.universe(), set.arity(), std::move(table));
}

DefinableSet tilde_table(const DefinableSet& set) {
    const auto& u = *set.universe();
    std::size_t n = finite_table_size(u, set.arity());
    std::vector<bool> table(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        auto point = finite_point(u, set.arity(), idx);
        std::vector<UPoint> args;
        for (const auto& c : point) args.push_back(UPoint::principal_finite(set.universe(), c));
        table[idx] = ext_rel_tilde(set, args);
    }
    return DefinableSet::finite(set.universe(), set.arity(), std::move(table));
}

}  // namespace

FiniteUltrafilter plus_map(const FiniteUltrafilter& point, const FunctionCarrier& carrier) {
    if (point.carrier_size != carrier.size()) throw std::invalid_argument("carrier size mismatch");
    DefOp extended = extension_table(carrier.element(point.element));
    return FiniteUltrafilter{carrier.size(), carrier.index_of(extended)};
}

LiftedUF i_map(const FiniteUltrafilter& point, const FunctionCarrier& carrier) {
    FiniteUltrafilter plussed = plus_map(point, carrier);
    std::vector<std::size_t> injection(carrier.size());
    for (std::size_t f = 0; f < carrier.size(); ++f)
        injection[f] = carrier.index_of(extension_table(carrier.element(f)));
    // The target carrier is the space of maps on points; over a finite
    // universe it is enumerated by the same table scheme.
    LiftedUF out;
    out.carrier_size = carrier.size();
    out.element = plussed.element;
    out.concentration.assign(injection.begin(), injection.end());
    std::sort(out.concentration.begin(), out.concentration.end());
    out.concentration.erase(std::unique(out.concentration.begin(), out.concentration.end()),
                            out.concentration.end());
    return out;
}

LiftedUF i_map(const FiniteUltrafilter& point, const RelationCarrier& carrier) {
    if (point.carrier_size != carrier.size()) throw std::invalid_argument("carrier size mismatch");
    DefinableSet basic = tilde_table(carrier.element(point.element));
    std::vector<std::size_t> image(carrier.size());
    for (std::size_t r = 0; r < carrier.size(); ++r)
        image[r] = carrier.index_of(tilde_table(carrier.element(r)));
    LiftedUF out;
    out.carrier_size = carrier.size();
    out.element = carrier.index_of(basic);
    out.concentration.assign(image.begin(), image.end());
    std::sort(out.concentration.begin(), out.concentration.end());
    out.concentration.erase(std::unique(out.concentration.begin(), out.concentration.end()),
                            out.concentration.end());
    return out;
}

LiftedUF I_map(const FiniteUltrafilter& point, const RelationCarrier& carrier) {
    if (point.carrier_size != carrier.size()) throw std::invalid_argument("carrier size mismatch");
    DefinableSet closed = closure_table(carrier.element(point.element));
    std::vector<std::size_t> image(carrier.size());
    for (std::size_t r = 0; r < carrier.size(); ++r)
        image[r] = carrier.index_of(closure_table(carrier.element(r)));
    LiftedUF out;
    out.carrier_size = carrier.size();
    out.element = carrier.index_of(closed);
    out.concentration.assign(image.begin(), image.end());
    std::sort(out.concentration.begin(), out.concentration.end());
    out.concentration.erase(std::unique(out.concentration.begin(), out.concentration.end()),
                            out.concentration.end());
    return out;
}

DefOp limit_of(const FiniteUltrafilter& point, const FunctionCarrier& carrier) {
    return carrier.element(point.element);
}

DefinableSet limit_of(const FiniteUltrafilter& point, const RelationCarrier& carrier) {
    return carrier.element(point.element);
}

DefOp limit_of(const LiftedUF& point, const FunctionCarrier& carrier) {
    return carrier.element(point.element);
}

DefinableSet limit_of(const LiftedUF& point, const RelationCarrier& carrier) {
    return carrier.element(point.element);
}

WideRelation i_map(GenRelation base) { return WideRelation{WideTag::LowerI, std::move(base)}; }
WideRelation I_map(GenRelation base) { return WideRelation{WideTag::UpperI, std::move(base)}; }
WideFunction i_map(GenFunction base) { return WideFunction{WideTag::LowerI, std::move(base)}; }
WideFunction I_map(GenFunction base) { return WideFunction{WideTag::UpperI, std::move(base)}; }

RelationOracle limit_of(const WideRelation& wide) {
    if (wide.tag == WideTag::LowerI) {
        GenRelation base = wide.base;
        return [base](std::span<const UPoint> args) { return in_tilde(args, base); };
    }
    return E_of(wide.base);
}

FunctionOracle limit_of(const WideFunction& wide) {
    GenFunction base = wide.base;
    return [base](std::span<const UPoint> args) { return app_tilde(args, base); };
}

bool modal_via_ext_check(const DefinableSet& relation, const UniversePtr& universe) {
    if (relation.is_symbolic()) throw std::invalid_argument("modal-via-ext check is finite-only");
    if (universe->size() > 3) throw std::invalid_argument("universe too large for the check");
    std::size_t n = relation.arity();
    const auto& u = *universe;
    std::size_t tuples = finite_table_size(u, n);

    // Ultrafilters over the tuple space are principal at tuples; the basic
    // set of R collects those generated by members of R.
    std::vector<std::size_t> basic;
    for (std::size_t idx = 0; idx < tuples; ++idx)
        if (relation.table()[idx]) basic.push_back(idx);

    // The extension of a tuple, viewed as a unary map from n into the
    // universe, evaluated coordinatewise at principal points.
    auto ext_of_tuple = [&](std::size_t idx) {
        auto point = finite_point(u, n, idx);
        std::vector<Int> image;
        for (std::size_t i = 0; i < n; ++i) {
            // coordinate projection as a map of the discrete index space
            image.push_back(point[i]);
        }
        return finite_index(u, image);
    };

    std::vector<bool> image_table(tuples, false);
    for (std::size_t idx : basic) image_table[ext_of_tuple(idx)] = true;

    // Star extension table over principal tuples.
    std::vector<bool> star_table(tuples, false);
    for (std::size_t idx = 0; idx < tuples; ++idx) {
        auto point = finite_point(u, n, idx);
        std::vector<UPoint> args;
        for (const auto& c : point) args.push_back(UPoint::principal_finite(universe, c));
        star_table[idx] = ext_rel_star(relation, args);
    }

    return image_table == star_table && star_table == relation.table();
}

}  // namespace ultrext

#pragma once

#include <json.hpp>

#include "collatzlab/chain.hpp"
#include "collatzlab/mixing.hpp"
#include "collatzlab/supernatural.hpp"

// JSON wire formats. All numerals are decimal strings so arbitrary
// precision survives any JSON reader; rationals are {"num","den"} pairs.

namespace collatzlab {

using json = nlohmann::ordered_json;

inline json to_json(const Rat& r) {
    return json{{"num", r.num().str()}, {"den", r.den().str()}};
}

inline Rat rat_from_json(const json& j) {
    return Rat(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
}

inline json to_json(const ArithClass& c) {
    return json{{"offset", c.offset().str()}, {"modulus", c.modulus().str()}};
}

inline ArithClass arith_class_from_json(const json& j) {
    return ArithClass(BigNat(j.at("offset").get<std::string>()),
                      BigNat(j.at("modulus").get<std::string>()));
}

/// A union serializes as a plain array of {offset, modulus} pairs.
inline json to_json(const ClassUnion& u) {
    json arr = json::array();
    for (const auto& c : u.classes()) arr.push_back(to_json(c));
    return arr;
}

inline ClassUnion class_union_from_json(const json& j) {
    std::vector<ArithClass> cs;
    for (const auto& item : j) cs.push_back(arith_class_from_json(item));
    return ClassUnion::of_classes(cs);
}

inline json to_json(const AffineBranch& b) {
    return json{{"dom_offset", b.dom_offset.str()},
                {"dom_modulus", b.dom_modulus.str()},
                {"val_c", b.val_c.str()},
                {"val_d", b.val_d.str()}};
}

inline json to_json(const BranchSystem& s) {
    json branches = json::array();
    for (const auto& b : s.branches()) branches.push_back(to_json(b));
    return json{{"step", s.step_index()}, {"branches", std::move(branches)}};
}

inline json to_json(const DistVec2& v) {
    return json{{"m0", to_json(v.m0)}, {"m1", to_json(v.m1)}};
}

inline json to_json(const Chain2& c) {
    return json{{"matrix",
                 json{{"p00", to_json(c.p00())}, {"p01", to_json(c.p01())},
                      {"p10", to_json(c.p10())}, {"p11", to_json(c.p11())}}},
                {"init", to_json(c.init())}};
}

inline Chain2 chain_from_json(const json& j) {
    const json& m = j.at("matrix");
    const json& i = j.at("init");
    return Chain2(rat_from_json(m.at("p00")), rat_from_json(m.at("p01")),
                  rat_from_json(m.at("p10")), rat_from_json(m.at("p11")),
                  rat_from_json(i.at("m0")), rat_from_json(i.at("m1")));
}

inline json to_json(const Supernatural& s) {
    json factors = json::array();
    for (const auto& [p, e] : s.factors())
        factors.push_back(json{{"p", p.str()}, {"e", e.is_infinite() ? "inf" : e.value().str()}});
    return json{{"factors", std::move(factors)}};
}

inline Supernatural supernatural_from_json(const json& j) {
    std::vector<std::pair<BigNat, SnExp>> fs;
    for (const auto& item : j.at("factors")) {
        std::string e = item.at("e").get<std::string>();
        fs.emplace_back(BigNat(item.at("p").get<std::string>()),
                        e == "inf" ? SnExp::infinity() : SnExp::finite(BigNat(e)));
    }
    return Supernatural::from_factors(fs);
}

inline json to_json(const RepeatedIntegralReport& r) {
    return json{{"function", r.function_tag},
                {"inner", r.inner == Inner::StepIndex ? "step_index" : "start_point"},
                {"value", to_json(r.value)},
                {"assumptions", r.assumptions}};
}

inline json to_json(const NuTable& t) {
    json rows = json::array();
    for (unsigned i = 0; i < 3; ++i) {
        json row = json::object();
        for (std::uint64_t v : {std::uint64_t{4}, std::uint64_t{2}, std::uint64_t{1}})
            row[std::to_string(v)] = to_json(t.included() == 0 ? Rat(0) : t.nu(i, v));
        rows.push_back(std::move(row));
    }
    return json{{"sample_size", t.sample_size},
                {"excluded", t.excluded},
                {"frequencies", std::move(rows)}};
}

inline json to_json(const MixingReport& r) {
    json forced = json::array();
    for (const auto& row : r.forced_table) {
        json jrow = json::array();
        for (const auto& cell : row) jrow.push_back(to_json(cell));
        forced.push_back(std::move(jrow));
    }
    return json{{"empirical", to_json(r.empirical)},
                {"rotation_relation_holds", r.rotation_relation_holds},
                {"forced_uniform_value", to_json(r.forced_uniform_value)},
                {"forced_table", std::move(forced)},
                {"mass_one_and_four", to_json(r.mass_one_and_four)},
                {"contradiction_gap",
                 json::array({to_json(r.contradiction_gap.first),
                              to_json(r.contradiction_gap.second)})},
                {"assumptions", r.assumptions},
                {"conclusion", r.conclusion}};
}

inline json to_json(const ImageIdentityReport& r) {
    json ids = json::array();
    for (const auto& id : r.identities) {
        json computed = json::array();
        for (const auto& c : id.computed) computed.push_back(to_json(c));
        json expected = json::array();
        for (const auto& c : id.expected) expected.push_back(to_json(c));
        ids.push_back(json{{"input", to_json(id.input)},
                           {"computed", std::move(computed)},
                           {"expected", std::move(expected)},
                           {"pass", id.pass}});
    }
    return json{{"identities", std::move(ids)}, {"all_pass", r.all_pass}};
}

inline json to_json(const FixedPointCheck& c) {
    return json{{"witness", to_json(c.witness)},
                {"steps_checked", c.steps_checked},
                {"stationary", c.stationary},
                {"reaches_one", c.reaches_one}};
}

inline json to_json(const AbsorptionCheck& c) {
    return json{{"two_times_two_inf_absorbed", c.two_times_two_inf_absorbed},
                {"three_times_two_inf_absorbed", c.three_times_two_inf_absorbed},
                {"three_exponent_is_one", c.three_exponent_is_one},
                {"conclusion", c.conclusion}};
}

} // namespace collatzlab

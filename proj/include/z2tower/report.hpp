#pragma once

#include <z2tower/tower.hpp>

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace z2tower {

using ordered_json = nlohmann::ordered_json;

namespace detail {

/* Fixed serialization order of the per-claim report fields. */
inline const std::vector<std::string> &report_check_keys() {
    static const std::vector<std::string> keys = {
        "condition1", "lemma31", "lemma32", "prop33", "lemma34", "prop35",
        "cor36",      "lemma37", "prop41",  "remark42", "thm11",
    };
    return keys;
}

inline ordered_json elem_to_json(const Zsqrt2Elem &x) {
    // Decimal strings: coordinates are arbitrary-precision integers.
    return ordered_json::array({x.a.get_str(), x.b.get_str()});
}

inline Zsqrt2Elem elem_from_json(const ordered_json &j) {
    return {mpz_class(j.at(0).get<std::string>()),
            mpz_class(j.at(1).get<std::string>())};
}

inline ordered_json place_to_json(const PlaceQ1 &v) {
    ordered_json j;
    j["kind"] = int(v.kind);
    j["p"] = v.p;
    j["index"] = v.index;
    j["inert"] = v.inert;
    j["uniformizer"] = elem_to_json(v.uniformizer);
    j["label"] = v.str();
    return j;
}

inline PlaceQ1 place_from_json(const ordered_json &j) {
    PlaceQ1 v;
    v.kind = PlaceQ1::Kind(j.at("kind").get<int>());
    v.p = j.at("p").get<std::uint64_t>();
    v.index = j.at("index").get<int>();
    v.inert = j.at("inert").get<bool>();
    v.uniformizer = elem_from_json(j.at("uniformizer"));
    return v;
}

inline ordered_json table_to_json(const SymbolTable &t) {
    ordered_json j;
    j["alpha"] = elem_to_json(t.alpha);
    j["beta"] = elem_to_json(t.beta);
    ordered_json entries = ordered_json::array();
    for (const auto &[place, value] : t.entries) {
        ordered_json e = place_to_json(place);
        e["value"] = int(value);
        entries.push_back(e);
    }
    j["entries"] = entries;
    j["product"] = int(t.product());
    return j;
}

inline SymbolTable table_from_json(const ordered_json &j) {
    SymbolTable t;
    t.alpha = elem_from_json(j.at("alpha"));
    t.beta = elem_from_json(j.at("beta"));
    for (const auto &e : j.at("entries"))
        t.entries.emplace_back(place_from_json(e), SymbolValue(e.at("value").get<int>()));
    return t;
}

inline ordered_json group_to_json(const AbelianGroupStructure &g) {
    return ordered_json(g.invariant_factors);
}

inline ordered_json check_to_json(const CheckResult &c) {
    ordered_json j;
    j["claimed"] = c.claimed;
    j["computed"] = c.computed;
    j["pass"] = c.pass;
    j["evidence"] = c.evidence;
    return j;
}

inline CheckResult check_from_json(const std::string &key, const ordered_json &j) {
    CheckResult c;
    c.key = key;
    c.claimed = j.at("claimed").get<std::string>();
    c.computed = j.at("computed").get<std::string>();
    c.pass = j.at("pass").get<bool>();
    c.evidence = j.at("evidence").get<std::string>();
    return c;
}

} // namespace detail

inline ordered_json report_to_json(const TripleReport &R) {
    ordered_json j;
    j["triple"] = {{"p", R.triple.p}, {"q", R.triple.q}, {"r", R.triple.r}};
    for (const auto &key : detail::report_check_keys()) {
        const CheckResult *c = R.find(key);
        j[key] = c ? detail::check_to_json(*c) : ordered_json(nullptr);
    }
    {
        ordered_json s;
        const CheckResult *c = R.find("structure");
        if (c)
            s = detail::check_to_json(*c);
        s["x_prime"] = R.x_prime_structure;
        s["x"] = R.x_structure;
        s["stability_notes"] = R.stability_notes;
        j["structure"] = s;
    }
    {
        ordered_json d;
        d["condition1_clauses"] = {
            {"p_is_9_mod_16", R.condition1.p_is_9_mod_16},
            {"q_is_3_mod_8", R.condition1.q_is_3_mod_8},
            {"r_is_3_mod_8", R.condition1.r_is_3_mod_8},
            {"legendre_qr_p", int(R.condition1.legendre_qr_p)},
            {"quartic_two_p", int(R.condition1.quartic_two_p)},
        };
        d["a_k"] = detail::group_to_json(R.a_k);
        d["a_f"] = detail::group_to_json(R.a_f);
        d["norm_facts"] = {
            {"unit_is_norm", R.norm_facts.unit_is_norm},
            {"minus_one_is_norm", R.norm_facts.minus_one_is_norm},
            {"unit_table", detail::table_to_json(R.norm_facts.unit_table)},
            {"minus_one_table", detail::table_to_json(R.norm_facts.minus_one_table)},
        };
        d["rank_a_k1"] = R.rank_a_k1;
        d["order_a_k1"] = R.order_a_k1;
        d["kuroda_checked"] = R.kuroda_checked;
        d["kuroda_two_part"] = R.kuroda_two_part;
        d["rank_a_k2_bound"] = R.rank_a_k2_bound;
        d["aprime_k0"] = R.aprime_k0;
        d["aprime_k1"] = R.aprime_k1;
        d["d_k0_order"] = R.d_k0_order;
        d["d_k1_order"] = R.d_k1_order;
        d["a1"] = R.a1;
        j["data"] = d;
    }
    j["overall"] = R.overall ? "pass" : "fail";
    return j;
}

inline TripleReport report_from_json(const ordered_json &j) {
    TripleReport R;
    R.triple = {j.at("triple").at("p").get<std::uint64_t>(),
                j.at("triple").at("q").get<std::uint64_t>(),
                j.at("triple").at("r").get<std::uint64_t>()};
    for (const auto &key : detail::report_check_keys())
        if (!j.at(key).is_null())
            R.checks.push_back(detail::check_from_json(key, j.at(key)));
    {
        const auto &s = j.at("structure");
        if (s.contains("pass"))
            R.checks.push_back(detail::check_from_json("structure", s));
        R.x_prime_structure = s.at("x_prime").get<std::string>();
        R.x_structure = s.at("x").get<std::string>();
        R.stability_notes = s.at("stability_notes").get<std::vector<std::string>>();
    }
    {
        const auto &d = j.at("data");
        const auto &c = d.at("condition1_clauses");
        R.condition1.p_is_9_mod_16 = c.at("p_is_9_mod_16").get<bool>();
        R.condition1.q_is_3_mod_8 = c.at("q_is_3_mod_8").get<bool>();
        R.condition1.r_is_3_mod_8 = c.at("r_is_3_mod_8").get<bool>();
        R.condition1.legendre_qr_p = SymbolValue(c.at("legendre_qr_p").get<int>());
        R.condition1.quartic_two_p = SymbolValue(c.at("quartic_two_p").get<int>());
        R.a_k.invariant_factors = d.at("a_k").get<std::vector<std::uint64_t>>();
        R.a_f.invariant_factors = d.at("a_f").get<std::vector<std::uint64_t>>();
        const auto &nf = d.at("norm_facts");
        R.norm_facts.unit_is_norm = nf.at("unit_is_norm").get<bool>();
        R.norm_facts.minus_one_is_norm = nf.at("minus_one_is_norm").get<bool>();
        R.norm_facts.unit_table = detail::table_from_json(nf.at("unit_table"));
        R.norm_facts.minus_one_table = detail::table_from_json(nf.at("minus_one_table"));
        R.rank_a_k1 = d.at("rank_a_k1").get<unsigned>();
        R.order_a_k1 = d.at("order_a_k1").get<std::uint64_t>();
        R.kuroda_checked = d.at("kuroda_checked").get<bool>();
        R.kuroda_two_part = d.at("kuroda_two_part").get<std::uint64_t>();
        R.rank_a_k2_bound = d.at("rank_a_k2_bound").get<unsigned>();
        R.aprime_k0 = d.at("aprime_k0").get<std::uint64_t>();
        R.aprime_k1 = d.at("aprime_k1").get<std::uint64_t>();
        R.d_k0_order = d.at("d_k0_order").get<std::uint64_t>();
        R.d_k1_order = d.at("d_k1_order").get<std::uint64_t>();
        R.a1 = d.at("a1").get<unsigned>();
    }
    R.overall = j.at("overall").get<std::string>() == "pass";
    return R;
}

namespace detail {

inline bool tables_equal(const SymbolTable &x, const SymbolTable &y) {
    if (!(x.alpha.a == y.alpha.a && x.alpha.b == y.alpha.b && x.beta.a == y.beta.a &&
          x.beta.b == y.beta.b && x.entries.size() == y.entries.size()))
        return false;
    for (size_t i = 0; i < x.entries.size(); ++i)
        if (!(x.entries[i].first == y.entries[i].first &&
              int(x.entries[i].second) == int(y.entries[i].second)))
            return false;
    return true;
}

} // namespace detail

/* Field-level equality, the round-trip contract for serialized reports. */
inline bool reports_equal(const TripleReport &x, const TripleReport &y) {
    if (!(x.triple == y.triple))
        return false;
    if (!(x.condition1.p_is_9_mod_16 == y.condition1.p_is_9_mod_16 &&
          x.condition1.q_is_3_mod_8 == y.condition1.q_is_3_mod_8 &&
          x.condition1.r_is_3_mod_8 == y.condition1.r_is_3_mod_8 &&
          int(x.condition1.legendre_qr_p) == int(y.condition1.legendre_qr_p) &&
          int(x.condition1.quartic_two_p) == int(y.condition1.quartic_two_p)))
        return false;
    if (x.a_k.invariant_factors != y.a_k.invariant_factors ||
        x.a_f.invariant_factors != y.a_f.invariant_factors)
        return false;
    if (!(x.norm_facts.unit_is_norm == y.norm_facts.unit_is_norm &&
          x.norm_facts.minus_one_is_norm == y.norm_facts.minus_one_is_norm &&
          detail::tables_equal(x.norm_facts.unit_table, y.norm_facts.unit_table) &&
          detail::tables_equal(x.norm_facts.minus_one_table,
                               y.norm_facts.minus_one_table)))
        return false;
    if (!(x.rank_a_k1 == y.rank_a_k1 && x.order_a_k1 == y.order_a_k1 &&
          x.kuroda_checked == y.kuroda_checked &&
          x.kuroda_two_part == y.kuroda_two_part &&
          x.rank_a_k2_bound == y.rank_a_k2_bound && x.aprime_k0 == y.aprime_k0 &&
          x.aprime_k1 == y.aprime_k1 && x.d_k0_order == y.d_k0_order &&
          x.d_k1_order == y.d_k1_order && x.a1 == y.a1))
        return false;
    if (x.x_prime_structure != y.x_prime_structure ||
        x.x_structure != y.x_structure || x.stability_notes != y.stability_notes ||
        x.overall != y.overall || x.checks.size() != y.checks.size())
        return false;
    for (const auto &c : x.checks) {
        const CheckResult *o = y.find(c.key);
        if (!o || o->claimed != c.claimed || o->computed != c.computed ||
            o->pass != c.pass || o->evidence != c.evidence)
            return false;
    }
    return true;
}

inline std::string render_json(const TripleReport &R) {
    return report_to_json(R).dump(2) + "\n";
}

inline std::string render_json(const std::vector<TripleReport> &reports) {
    ordered_json arr = ordered_json::array();
    for (const auto &R : reports)
        arr.push_back(report_to_json(R));
    ordered_json j;
    j["reports"] = arr;
    return j.dump(2) + "\n";
}

/* One column per report field; the triple is quoted since it embeds commas. */
inline std::string csv_header() {
    std::string h = "triple";
    for (const auto &key : detail::report_check_keys())
        h += "," + key;
    return h + ",structure,overall\n";
}

inline std::string csv_row(const TripleReport &R) {
    std::string row = "\"" + R.triple.str() + "\"";
    auto cell = [&R](const std::string &key) -> std::string {
        const CheckResult *c = R.find(key);
        return c ? (c->pass ? "pass" : "fail") : "absent";
    };
    for (const auto &key : detail::report_check_keys())
        row += "," + cell(key);
    row += "," + cell("structure");
    row += std::string(",") + (R.overall ? "pass" : "fail") + "\n";
    return row;
}

inline std::string render_csv(const std::vector<TripleReport> &reports) {
    std::string out = csv_header();
    for (const auto &R : reports)
        out += csv_row(R);
    return out;
}

/* Human-readable rendering, not covered by the stability contract. */
inline std::string render_text(const TripleReport &R) {
    std::ostringstream os;
    os << "triple (" << R.triple.str() << ")\n";
    for (const auto &c : R.checks) {
        os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.key << ": "
           << c.claimed << "\n"
           << "         computed: " << c.computed << "\n"
           << "         evidence: " << c.evidence << "\n";
    }
    if (!R.x_prime_structure.empty()) {
        os << "  X' = " << R.x_prime_structure << "\n";
        os << "  X  = " << R.x_structure << "\n";
        for (const auto &note : R.stability_notes)
            os << "    note: " << note << "\n";
    }
    os << "overall: " << (R.overall ? "pass" : "fail") << "\n";
    return os.str();
}

inline std::string render_text(const std::vector<TripleReport> &reports) {
    std::string out;
    for (const auto &R : reports)
        out += render_text(R);
    return out;
}

} // namespace z2tower

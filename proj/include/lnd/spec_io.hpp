// JSON input documents describing derivations and JSON report builders for
// the CLI. A spec document carries a variable list plus images, a kernel
// pair, or both; when both are present they must agree up to the scale.
#pragma once

#include "lnd/derivation.hpp"
#include "lnd/errors.hpp"
#include "lnd/image_ideal.hpp"
#include "lnd/newton.hpp"
#include "lnd/normal_form.hpp"
#include "lnd/parser.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lnd {

using nlohmann::json;

struct ParsedSpec {
    VarListPtr ring;
    std::optional<Derivation> from_images;
    std::optional<KernelPair> pair;
    std::optional<Derivation> resolved;

    const Derivation& derivation() const {
        if (!resolved) throw Error(ErrorCode::SemanticError, "spec has no derivation");
        return *resolved;
    }
};

inline ParsedSpec parse_derivation_spec(const json& doc) {
    if (!doc.is_object())
        throw Error(ErrorCode::SemanticError, "spec document must be a JSON object");
    if (!doc.contains("variables") || !doc["variables"].is_array())
        throw Error(ErrorCode::SemanticError, "spec needs a 'variables' array");
    VarList names;
    for (const auto& v : doc["variables"]) {
        if (!v.is_string())
            throw Error(ErrorCode::SemanticError, "variable names must be strings");
        names.push_back(v.get<std::string>());
    }
    if (names.size() < 2 || names.size() > 3)
        throw Error(ErrorCode::SemanticError, "expected two or three variables");
    ParsedSpec spec;
    spec.ring = make_ring(names);

    if (doc.contains("images")) {
        const json& images = doc["images"];
        if (!images.is_object())
            throw Error(ErrorCode::SemanticError, "'images' must map variables to expressions");
        std::vector<Polynomial> imgs;
        for (const auto& name : names) {
            if (!images.contains(name))
                throw Error(ErrorCode::SemanticError, "missing image for variable " + name);
            imgs.push_back(parse_polynomial(images[name].get<std::string>(), spec.ring));
        }
        spec.from_images = Derivation(spec.ring, std::move(imgs));
    }

    if (doc.contains("kernel_pair")) {
        const json& kp = doc["kernel_pair"];
        if (!kp.is_object() || !kp.contains("x") || !kp.contains("p"))
            throw Error(ErrorCode::SemanticError, "'kernel_pair' needs fields 'x' and 'p'");
        KernelPair pair{parse_polynomial(kp["x"].get<std::string>(), spec.ring),
                        parse_polynomial(kp["p"].get<std::string>(), spec.ring),
                        Rational(1)};
        bool scale_given = kp.contains("scale");
        if (scale_given) pair.scale = parse_rational(kp["scale"].get<std::string>());

        if (spec.from_images) {
            Derivation delta = jacobian_derivation(pair.x, pair.p);
            if (scale_given) {
                if (!(*spec.from_images == KernelPair{pair.x, pair.p, pair.scale}.derivation()))
                    throw Error(ErrorCode::SemanticError,
                                "images do not equal scale * Jacobian(x, p)");
            } else {
                auto gamma = proportionality_scalar(*spec.from_images, delta);
                if (!gamma || gamma->is_zero())
                    throw Error(ErrorCode::SemanticError,
                                "images are not a nonzero multiple of Jacobian(x, p)");
                pair.scale = *gamma;
            }
            if (!spec.from_images->apply(pair.x).is_zero())
                throw Error(ErrorCode::SemanticError,
                            "D(x) != 0 for the declared kernel element");
        }
        spec.pair = std::move(pair);
    }

    if (spec.from_images)
        spec.resolved = spec.from_images;
    else if (spec.pair)
        spec.resolved = spec.pair->derivation();
    else
        throw Error(ErrorCode::SemanticError, "spec needs 'images' or 'kernel_pair'");
    return spec;
}

inline ParsedSpec parse_derivation_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SemanticError, std::string("bad JSON: ") + e.what());
    }
    return parse_derivation_spec(doc);
}

// ---- report builders ----

inline json matrix_json(const QMat& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v.str());
        rows.push_back(std::move(r));
    }
    return rows;
}

inline json derivation_json(const Derivation& d) {
    json images = json::object();
    for (std::size_t i = 0; i < d.vars().size(); ++i)
        images[d.vars()[i]] = d.image(i).str();
    return json{{"variables", d.vars()}, {"images", images}};
}

inline json verify_report_json(const VerifyReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(json{{"name", c.name},
                              {"expected", c.expected},
                              {"got", c.got},
                              {"ok", c.ok}});
    return json{{"all_ok", rep.all_ok},
                {"degd_y", rep.degd_y},
                {"degd_z", rep.degd_z},
                {"checks", std::move(checks)}};
}

inline json verdict_json(const NormalFormReport& rep) {
    const Verdict& v = rep.verdict;
    json out{{"kind", verdict_kind_name(v.kind)},
             {"degree", v.d},
             {"change", matrix_json(rep.total_change.matrix())},
             {"normal_form", rep.p_final.str()},
             {"gamma", rep.gamma.str()},
             {"degd_y", rep.verify.degd_y},
             {"degd_z", rep.verify.degd_z},
             {"verification", verify_report_json(rep.verify)}};
    if (v.tri) {
        out["beta"] = v.tri->beta.str();
        out["f_top"] = v.tri->f_top.str();
    }
    if (v.ntr) {
        const NtrForm& n = *v.ntr;
        json cs = json::array();
        for (const auto& c : n.c) cs.push_back(c.str());
        out["ntr"] = json{{"p", n.p},
                          {"q", n.q},
                          {"h", n.h.str()},
                          {"t", n.t_def.str()},
                          {"c", std::move(cs)},
                          {"loop_iterations", n.loop_iterations}};
    }
    if (v.kind == VerdictKind::Undecided) out["reason"] = v.reason;
    return out;
}

inline json sa_json(const SaForm& sa) {
    return json{{"change", matrix_json(sa.change.matrix())},
                {"p_normalized", sa.p_normalized.str()},
                {"unit", sa.unit.str()},
                {"pure_x_coeff", sa.pure_x_coeff.str()}};
}

inline json sb_json(const SbForm& sb) {
    json fj = json::array();
    for (const auto& f : sb.fj) fj.push_back(f.str());
    return json{{"change", matrix_json(sb.change.matrix())},
                {"p", sb.p.str()},
                {"i", sb.i},
                {"beta", sb.beta.str()},
                {"zdeg", sb.zdeg},
                {"fj", std::move(fj)}};
}

inline json hull_json(const NewtonPolygon& np) {
    json hull = json::array();
    for (const auto& v : np.hull) hull.push_back(json::array({v.x, v.y}));
    return hull;
}

inline json image_ideal_row_json(const ImageIdealRow& row) {
    json out{{"n", row.n},
             {"t", row.t},
             {"r", row.r},
             {"s", row.s},
             {"formula_exponent", row.formula_exponent},
             {"oracle_exponent", row.oracle_exponent},
             {"witness_scalar", row.witness_scalar.str()}};
    if (row.case_b_exponent) out["case_b_exponent"] = *row.case_b_exponent;
    return out;
}

}  // namespace lnd

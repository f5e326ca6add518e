#include "CLI11.hpp"
#include "json.hpp"
#include "qtw/identities.hpp"
#include "qtw/qchar_engine.hpp"
#include "qtw/repcheck.hpp"
#include "qtw/root_data.hpp"
#include "qtw/suite.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace qtw;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string type_name = "A2^2";
    int trunc = 4;
    std::string node = "1";
    std::string param = "1";
    std::string output;
    std::string format = "json";
    unsigned precision_bits = 200;
    bool untwisted = false;

    // qchar / fold
    std::string kr, monomial, neg_prefund, pos_prefund, module;
    int bound = -1;
    // detf
    long k = 0;
    // repcheck
    std::string vanishing;
    bool lweights = false;
    // bae
    std::string q0 = "5/4";
    int samples = 3;
    // verify-all
    std::vector<std::string> only;
};

FramePtr frame(const RunConfig& c) {
    TwistedType t = twisted_type(c.type_name);
    return c.untwisted ? Frame::ade(t) : Frame::folded(t);
}

SpectralParam param(const FramePtr& f, const std::string& text) { return SpectralParam::parse(text, f->display_L()); }

// Result of a subcommand: a JSON document, its text rendering, and whether every check in it passed.
struct Output {
    json doc;
    std::string text;
    bool ok = true;
};

std::string report_line(const Report& r) {
    std::string s = (r.ok ? "PASS  " : "FAIL  ") + r.relation + "  (" + std::to_string(r.vectors_checked) + ")";
    if (r.first_failure) s += "\n      " + *r.first_failure;
    return s;
}

Output from_reports(const std::vector<Report>& rs) {
    Output o;
    o.doc = to_json(rs);
    for (const auto& r : rs) {
        o.text += report_line(r) + "\n";
        o.ok = o.ok && r.ok;
    }
    return o;
}

Output from_qchar(const QCharacter& c) { return {c.to_json(), c.str() + "\n", true}; }

QCharacter kr_from_text(const FramePtr& f, const std::string& text, int trunc) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("--kr expects node,k,param");
    return kr_qcharacter(f, f->parse_label(parts[0]), std::stoi(parts[1]), param(f, parts[2]), trunc);
}

Output cmd_qchar(const RunConfig& c) {
    if (!c.module.empty()) {
        int bound = c.bound >= 0 ? c.bound : c.trunc + 3;
        return from_qchar(qchar_from_module(load_builtin(c.module, bound)).truncated(std::min(c.trunc, bound - 3)));
    }
    FramePtr f = frame(c);
    if (!c.kr.empty()) return from_qchar(kr_from_text(f, c.kr, c.trunc));
    if (!c.monomial.empty()) return from_qchar(monomial_qcharacter(f, DominantMonomial::parse(c.monomial, *f), c.trunc));
    if (!c.neg_prefund.empty())
        return from_qchar(neg_prefund_qchar(f, f->parse_label(c.neg_prefund), param(f, c.param), c.trunc));
    if (!c.pos_prefund.empty())
        return from_qchar(pos_prefund_qchar(f, f->parse_label(c.pos_prefund), param(f, c.param), c.trunc));
    throw std::invalid_argument("qchar needs one of --kr, --monomial, --neg-prefund, --pos-prefund, --module");
}

Output cmd_fold(const RunConfig& c) {
    TwistedType t = twisted_type(c.type_name);
    FramePtr ade = Frame::ade(t), tw = Frame::folded(t);
    QCharacter src;
    if (!c.kr.empty())
        src = kr_from_text(ade, c.kr, c.trunc);
    else if (!c.monomial.empty())
        src = fm_qcharacter(ade, DominantMonomial::parse(c.monomial, *ade), c.trunc);
    else if (!c.module.empty())
        src = qchar_from_module(load_builtin(c.module, c.bound >= 0 ? c.bound : c.trunc + 3));
    else
        throw std::invalid_argument("fold needs one of --kr, --monomial, --module");
    return from_qchar(fold_char(tw, src));
}

Output cmd_detf(const RunConfig& c) {
    TwistedType t = twisted_type(c.type_name);
    std::vector<long> ks;
    if (c.k > 0) {
        ks.push_back(c.k);
    } else {
        for (long k = 1; k <= 4; ++k) ks.push_back(t.M * k);
        for (long k = 1, found = 0; found < 4; ++k)
            if (k % t.M != 0) ks.push_back(k), ++found;
    }
    Output o;
    o.doc = json::array();
    for (long k : ks) {
        bool divisible = k % t.M == 0;
        bool has_form = t.family != TwistedFamily::A_even;
        CycloRational v = divisible ? det_f(t, k) : det_f_prime(t, k);
        json j = {{"type", t.name}, {"k", k}, {"kind", divisible ? "F" : "F'"}, {"value", v.str()}};
        std::string line = t.name + " k=" + std::to_string(k) + (divisible ? " det F = " : " det F' = ") + v.str();
        if (has_form) {
            CycloRational w = divisible ? det_f_closed_form(t, k) : det_f_prime_closed_form(t, k);
            bool ok = v == w;
            j["closed_form"] = w.str();
            j["status"] = ok ? "pass" : "fail";
            line += ok ? "  [matches table]" : "  [table: " + w.str() + "]";
            o.ok = o.ok && ok;
        }
        o.doc.push_back(j);
        o.text += line + "\n";
    }
    return o;
}

Output cmd_repcheck(const RunConfig& c) {
    if (c.module.empty()) throw std::invalid_argument("repcheck needs --module");
    GradedModule m = load_builtin(c.module, c.bound >= 0 ? c.bound : 10);
    std::vector<Report> rs = verify_presentation(m);
    if (!c.vanishing.empty()) rs.push_back(verify_phi_vanishing(m, param(module_frame(m), c.vanishing)));
    Output o = from_reports(rs);
    if (c.lweights) {
        QCharacter chi = qchar_from_module(m);
        o.doc = {{"relations", o.doc}, {"qcharacter", chi.to_json()}};
        o.text += chi.str() + "\n";
    }
    return o;
}

Output cmd_qq(const RunConfig& c) {
    FramePtr f = frame(c);
    std::vector<Report> rs;
    if (c.node == "all") {
        for (int slot = 0; slot < f->slots; ++slot)
            for (auto a : {"1", "q", "-1"}) rs.push_back(verify_qq(f, slot, param(f, a), c.trunc));
    } else {
        rs.push_back(verify_qq(f, f->parse_label(c.node), param(f, c.param), c.trunc));
    }
    return from_reports(rs);
}

Output cmd_tq(const RunConfig& c) {
    FramePtr f = frame(c);
    TQRelation rel = tq_relation(f, f->parse_label(c.node), param(f, c.param), c.trunc);
    Output o;
    o.doc = {{"identity", rel.str(*f)}, {"cleared", rel.cleared_str(*f)}, {"check", rel.check.to_json()}};
    o.text = rel.str(*f) + "\n" + rel.cleared_str(*f) + "\n" + report_line(rel.check) + "\n";
    o.ok = rel.check.ok;
    return o;
}

Real parse_real(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Real(text);
    return Real(text.substr(0, slash)) / Real(text.substr(slash + 1));
}

Output cmd_bae(const RunConfig& c) {
    FramePtr f = frame(c);
    set_precision_bits(c.precision_bits);
    BetheSystem sys = bethe_equations(f);
    NumericCheck check = numeric_consistency(f, Complex(parse_real(c.q0)), c.samples);
    std::string err = check.max_rel_error.str(6, std::ios_base::scientific);
    Output o;
    json eqs = json::array();
    for (const auto& e : sys.equations) eqs.push_back(e.str(*f));
    o.doc = {{"type", sys.type},
             {"equations", eqs},
             {"numeric", {{"q0", c.q0}, {"precision_bits", c.precision_bits}, {"samples", check.samples},
                          {"max_rel_error", err}}}};
    o.text = sys.str(*f) + "numeric: " + std::to_string(check.samples) + " samples, max relative error " + err + "\n";
    return o;
}

Output cmd_counterexamples(const RunConfig& c) { return from_reports(verify_counterexamples(c.trunc)); }

Output cmd_verify_all(const RunConfig& c) {
    std::set<std::string> only(c.only.begin(), c.only.end());
    auto checks = run_suite(only, [](const SuiteCheck& s) {
        std::cerr << (s.info ? "info  " : s.report.ok ? "pass  " : "FAIL  ") << s.report.relation << "\n";
    });
    Output o;
    json arr = json::array();
    long passed = 0, failed = 0, info = 0;
    for (const auto& s : checks) {
        arr.push_back(s.to_json());
        if (s.info)
            ++info;
        else if (s.report.ok)
            ++passed;
        else
            ++failed;
        std::string tag = s.info ? "INFO  " : s.report.ok ? "PASS  " : "FAIL  ";
        o.text += tag + "[" + s.anchor + "] " + s.report.relation + "\n";
        if (!s.report.ok) o.text += "      " + s.report.first_failure.value_or("") + "\n";
    }
    o.doc = {{"checks", arr}, {"summary", {{"passed", passed}, {"failed", failed}, {"info", info}}}};
    o.text += std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " + std::to_string(info) +
              " informational\n";
    o.ok = failed == 0;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact q-characters, module checks and ring identities for twisted quantum affine algebras"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file mirroring the long options");
    RunConfig c;
    app.add_option("--type", c.type_name, "A2^2, A3^2, D3^2, D4^2, E6^2, D4^3, ...")->capture_default_str();
    app.add_option("--trunc", c.trunc, "truncation height")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--node", c.node, "orbit label (node label with --untwisted)")->capture_default_str();
    app.add_option("--param", c.param, "spectral parameter, e.g. q^{-1/2}*w^{1} or -q^2")->capture_default_str();
    app.add_option("--output", c.output, "write the result to this file");
    app.add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_option("--precision-bits", c.precision_bits, "bits for numeric checks")->capture_default_str();
    app.add_flag("--untwisted", c.untwisted, "work in the simply-laced frame of the type");

    auto qchar = app.add_subcommand("qchar", "truncated q-character");
    auto fold = app.add_subcommand("fold", "fold a non-twisted q-character");
    for (auto* s : {qchar, fold}) {
        s->add_option("--kr", c.kr, "KR module node,k,param");
        s->add_option("--monomial", c.monomial, "dominant monomial, e.g. Z[1,1]*Z[1,q^2]");
        s->add_option("--module", c.module, "built-in module");
        s->add_option("--bound", c.bound, "truncation bound of the built-in module");
    }
    qchar->add_option("--neg-prefund", c.neg_prefund, "negative prefundamental at this orbit");
    qchar->add_option("--pos-prefund", c.pos_prefund, "positive prefundamental at this orbit");

    auto detf = app.add_subcommand("detf", "determinants of F(k) and F'(k)");
    detf->add_option("--k", c.k, "single k (default: four of each divisibility class)");

    auto rep = app.add_subcommand("repcheck", "relations and phi data of a built-in module");
    rep->add_option("--module", c.module, "neg_prefund_A2t, pos_prefund_A2t, X_A2t, Xtilde_sl3")->required();
    rep->add_option("--bound", c.bound, "truncation bound (default 10)");
    rep->add_option("--vanishing", c.vanishing, "also check phi(a^-1) v = 0 at this root");
    rep->add_flag("--lweights", c.lweights, "also print the q-character read from the module");

    auto qq = app.add_subcommand("qq-verify", "QQ-tilde system (--node all for every orbit and a in {1, q, -1})");
    auto tq = app.add_subcommand("tq", "TQ relation of a fundamental module");
    auto bae = app.add_subcommand("bae", "Bethe Ansatz equations and a numeric consistency check");
    bae->add_option("--q0", c.q0, "numeric value of q")->capture_default_str();
    bae->add_option("--samples", c.samples, "random samples")->capture_default_str();
    auto cex = app.add_subcommand("counterexamples", "dimension and folding counterexamples (--trunc is the window)");
    auto all = app.add_subcommand("verify-all", "full verification suite");
    std::string groups_help = "comma-separated groups:";
    for (const auto& g : suite_groups()) groups_help += " " + g.name;
    all->add_option("--only", c.only, groups_help)->delimiter(',');

    for (auto* s : app.get_subcommands({})) s->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        Output o;
        if (*qchar) o = cmd_qchar(c);
        else if (*fold) o = cmd_fold(c);
        else if (*detf) o = cmd_detf(c);
        else if (*rep) o = cmd_repcheck(c);
        else if (*qq) o = cmd_qq(c);
        else if (*tq) o = cmd_tq(c);
        else if (*bae) o = cmd_bae(c);
        else if (*cex) o = cmd_counterexamples(c);
        else if (*all) o = cmd_verify_all(c);
        std::string text = c.format == "json" ? o.doc.dump(2) + "\n" : o.text;
        if (c.output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(c.output, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + c.output);
            out << text;
        }
        return o.ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

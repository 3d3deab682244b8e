// Command-line front end: witness searches and pipelines, exact numbers with
// checkpointing, symbolic bounds, validity checks, and coloring generation.
//
// Exit codes: 0 success / witness found; 1 proven none / violation found;
// 2 budget exceeded; 3 usage error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hjw/bounds.hpp"
#include "hjw/coloring.hpp"
#include "hjw/equiv.hpp"
#include "hjw/exact.hpp"
#include "hjw/pipelines.hpp"
#include "hjw/search.hpp"
#include "hjw/subspaces.hpp"
#include "hjw/words.hpp"

namespace {

constexpr int kExitFound = 0;
constexpr int kExitNone = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 3;

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hjw::BadParams("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

// All artifact writes go through a temp-rename so readers never see a torn
// file.
void write_artifact(const std::string& path, const nlohmann::json& j) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw hjw::BadParams("cannot write " + tmp);
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& out_path, const nlohmann::json& j) {
    if (out_path.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_artifact(out_path, j);
}

// --- witness JSON schema ------------------------------------------------------

nlohmann::json partial_to_json(const hjw::PartialWord& p) {
    return {{"domain", p.domain}, {"letters", p.letters}};
}

hjw::PartialWord partial_from_json(const nlohmann::json& j) {
    hjw::PartialWord p;
    p.domain = j.at("domain").get<std::vector<int>>();
    p.letters = j.at("letters").get<std::vector<int>>();
    return p;
}

nlohmann::json subspace_to_json(const hjw::ConvexSubspace& s) {
    return {{"format", 1},
            {"type", "subspace"},
            {"blocks", s.blocks},
            {"fixed", partial_to_json(s.fixed)}};
}

hjw::ConvexSubspace subspace_from_json(const nlohmann::json& j) {
    hjw::ConvexSubspace s;
    s.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
    s.fixed = partial_from_json(j.at("fixed"));
    return s;
}

nlohmann::json grid_to_json(const hjw::GridPattern& g, hjw::GridHeadroom headroom) {
    return {{"format", 1},
            {"type", "grid"},
            {"difference", g.difference},
            {"offsets", g.offsets},
            {"side", g.side},
            {"headroom", headroom == hjw::GridHeadroom::strict ? "strict" : "fit"}};
}

nlohmann::json equiv_to_json(const hjw::EquivKind& kind) {
    switch (kind.tag) {
        case hjw::EquivKind::Tag::full_sym:
            return {{"equiv", "full-sym"}};
        case hjw::EquivKind::Tag::alpha_iso:
            return {{"equiv", "alpha-iso"}, {"base", kind.base}};
        case hjw::EquivKind::Tag::subgroup:
            return {{"equiv", "subgroup"}, {"generators", kind.group.generators}};
    }
    return {};
}

hjw::EquivKind equiv_from_json(const nlohmann::json& j, int ground_length) {
    const std::string name = j.at("equiv").get<std::string>();
    if (name == "full-sym") return hjw::EquivKind::full_sym();
    if (name == "alpha-iso") return hjw::EquivKind::alpha_iso(j.at("base").get<int>());
    if (name == "subgroup")
        return hjw::EquivKind::subgroup(hjw::PermGroup::of(
            ground_length, j.at("generators").get<std::vector<std::vector<int>>>()));
    throw hjw::BadParams("unknown equivalence: " + name);
}

nlohmann::json par_to_json(const hjw::ParWitness& w) {
    nlohmann::json j{{"format", 1},
                     {"type", "par"},
                     {"positions", w.positions},
                     {"injection", w.injection},
                     {"fill", partial_to_json(w.fill)}};
    j.update(equiv_to_json(w.kind));
    return j;
}

hjw::ParWitness par_from_json(const nlohmann::json& j, int ground_length) {
    hjw::ParWitness w;
    w.positions = j.at("positions").get<std::vector<int>>();
    w.injection = j.at("injection").get<std::vector<int>>();
    w.fill = partial_from_json(j.at("fill"));
    w.kind = equiv_from_json(j, ground_length);
    return w;
}

nlohmann::json nonconvex_to_json(const hjw::NonConvexSubspace& s) {
    return {{"format", 1},
            {"type", "nonconvex"},
            {"classes", s.classes},
            {"fixed", partial_to_json(s.fixed)},
            {"convex", s.convex}};
}

hjw::NonConvexSubspace nonconvex_from_json(const nlohmann::json& j) {
    hjw::NonConvexSubspace s;
    s.classes = j.at("classes").get<std::vector<std::vector<int>>>();
    s.fixed = partial_from_json(j.at("fixed"));
    s.convex = j.value("convex", false);
    return s;
}

// --- shared coloring input ----------------------------------------------------

struct ColoringInput {
    std::string file;
    std::string family;
    int ground = 0;
    int alphabet = 2;
    int colors = 2;
    int value = 0;
    int base = 0;
    std::uint64_t seed = 0;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--coloring", file, "coloring JSON file");
        cmd->add_option("--family", family, "generate instead: constant|parity|random");
        cmd->add_option("--ground", ground, "ground length for --family");
        cmd->add_option("--alphabet", alphabet, "alphabet size for --family");
        cmd->add_option("--colors", colors, "color count for --family");
        cmd->add_option("--value", value, "constant family value");
        cmd->add_option("--base", base, "parity family base letter");
        cmd->add_option("--seed", seed, "random family seed");
    }

    hjw::Coloring load() const {
        if (!file.empty()) return hjw::Coloring::from_json(load_json(file));
        if (family.empty())
            throw hjw::BadParams("provide --coloring FILE or --family with its parameters");
        const hjw::Ground g{ground};
        const hjw::Alphabet a{alphabet};
        const hjw::ColorSet c{colors};
        if (family == "constant") return hjw::Coloring::constant(g, a, c, value);
        if (family == "parity") return hjw::Coloring::parity(g, a, c, base);
        if (family == "random") return hjw::Coloring::random(g, a, c, seed);
        throw hjw::BadParams("unknown coloring family: " + family);
    }
};

std::vector<int> parse_csv_ints(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

// --- subcommand: exact ----------------------------------------------------------

struct ExactArgs {
    std::string kind;
    int dim = 0, side = 0, target = 0, tuple = 0, level_bound = 0, alphabet = 0, base = 0,
        colors = 0;
    int workers = 1;
    std::uint64_t budget_nodes = 0;
    double budget_seconds = 0.0;
    std::string checkpoint;
    std::string out = "certificate.json";
};

hjw::NumberKind kind_from_args(const ExactArgs& a) {
    if (a.kind == "hj") return hjw::NumberKind::hj(a.dim, a.alphabet, a.colors);
    if (a.kind == "vdw") return hjw::NumberKind::vdw(a.dim, a.side, a.colors);
    if (a.kind == "ramsey") return hjw::NumberKind::ramsey(a.target, a.tuple, a.colors);
    if (a.kind == "level-ramsey")
        return hjw::NumberKind::level_ramsey(a.target, a.level_bound, a.colors);
    if (a.kind == "par-alpha")
        return hjw::NumberKind::par_alpha(a.target, a.alphabet, a.base, a.colors);
    if (a.kind == "par-full") return hjw::NumberKind::par_full(a.target, a.alphabet, a.colors);
    throw hjw::BadParams("unknown exact kind: " + a.kind);
}

int run_exact(const ExactArgs& a) {
    const hjw::NumberKind kind = kind_from_args(a);
    hjw::ExactOptions opt;
    if (a.budget_nodes > 0) opt.node_budget = a.budget_nodes;
    if (a.budget_seconds > 0) opt.time_budget_seconds = a.budget_seconds;
    opt.workers = a.workers;
    opt.checkpoint_path = a.checkpoint;
    try {
        const hjw::Certificate cert = hjw::exact_number(kind, opt);
        std::cout << cert.value << '\n';
        if (!a.out.empty()) {
            write_artifact(a.out, cert.to_json());
            std::cerr << "certificate written to " << a.out << '\n';
        }
        return kExitFound;
    } catch (const hjw::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "; value >= " << e.lower;
        if (e.upper) std::cerr << ", value <= " << *e.upper;
        std::cerr << '\n';
        return kExitBudget;
    }
}

// --- subcommand: bound ----------------------------------------------------------

struct BoundArgs {
    std::string kind;
    std::uint64_t r = 0, m = 0;
    int level = 0;
    std::string args_csv;
    int dim = 0, alphabet = 0, target = 0, tuple = 0, level_bound = 0;
    std::uint64_t colors = 0;
    std::string w_value;
    std::uint64_t max_digits = 1000000;
    std::size_t max_chars = 1 << 16;
    std::string out;
};

int run_bound(const BoundArgs& a) {
    const hjw::FoldPolicy policy{a.max_digits};
    hjw::BigBound b;
    if (a.kind == "gowers") {
        b = hjw::gowers_W_bound(hjw::BigInt(a.r), hjw::BigInt(a.m));
    } else if (a.kind == "grzegorczyk") {
        std::vector<hjw::BigInt> xs;
        for (int v : parse_csv_ints(a.args_csv)) xs.emplace_back(v);
        b = hjw::grzegorczyk_E(a.level, xs, policy);
    } else if (a.kind == "ramsey") {
        b = hjw::ramsey_R_bound(hjw::BigBound::from_int(a.target),
                                hjw::BigBound::from_int(a.tuple),
                                hjw::BigBound::from_int(hjw::BigInt(a.colors)), nullptr,
                                policy);
    } else if (a.kind == "level-ramsey") {
        b = hjw::level_ramsey_bound(hjw::BigBound::from_int(a.level_bound),
                                    hjw::BigBound::from_int(hjw::BigInt(a.colors)), nullptr,
                                    policy);
    } else if (a.kind == "par-alpha") {
        b = hjw::par_alpha_bound(hjw::BigBound::from_int(a.target),
                                 hjw::BigBound::from_int(a.alphabet),
                                 hjw::BigBound::from_int(hjw::BigInt(a.colors)), nullptr,
                                 policy);
    } else if (a.kind == "par-full") {
        b = hjw::par_full_bound(hjw::BigBound::from_int(a.target), a.alphabet,
                                hjw::BigBound::from_int(hjw::BigInt(a.colors)), nullptr,
                                policy);
    } else if (a.kind == "hj") {
        std::optional<hjw::BigBound> w;
        if (!a.w_value.empty()) w = hjw::BigBound::from_int(hjw::BigInt(a.w_value));
        b = hjw::hj_bound(a.dim, a.alphabet, hjw::BigBound::from_int(hjw::BigInt(a.colors)),
                          w, nullptr, policy);
    } else if (a.kind == "hj-packing") {
        b = hjw::hj_bound_via_packing(a.dim, a.alphabet, hjw::BigInt(a.colors));
    } else {
        throw hjw::BadParams("unknown bound kind: " + a.kind);
    }
    std::cout << b.to_string(a.max_chars) << '\n';
    if (!a.out.empty()) {
        nlohmann::json j = b.to_json();
        j["display"] = b.to_string(a.max_chars);
        write_artifact(a.out, j);
    }
    return kExitFound;
}

// --- subcommand: witness ---------------------------------------------------------

struct WitnessArgs {
    std::string find;
    ColoringInput input;
    std::string set_coloring_file;
    std::string level_coloring_file;
    int dim = 1;
    int side = 2;
    std::string headroom = "strict";
    int size = 1;
    int target = 1;
    std::string equiv = "full-sym";
    int base = 0;
    bool widen = false;
    std::string sizes_csv;
    int m = 1;
    std::string out;
};

int run_witness(const WitnessArgs& a) {
    nlohmann::json result{{"format", 1}, {"search", a.find}};
    bool found = false;

    if (a.find == "subspace") {
        const hjw::Coloring c = a.input.load();
        const auto s = hjw::find_mono_subspace(c, a.dim);
        found = s.has_value();
        result["witness"] = s ? subspace_to_json(*s) : nlohmann::json(nullptr);
    } else if (a.find == "grid") {
        const hjw::Coloring c = a.input.load();
        const hjw::GridHeadroom h =
            a.headroom == "fit" ? hjw::GridHeadroom::fit : hjw::GridHeadroom::strict;
        const auto g = hjw::find_grid_pattern(c, a.side, h);
        found = g.has_value();
        result["witness"] = g ? grid_to_json(*g, h) : nlohmann::json(nullptr);
    } else if (a.find == "par") {
        const hjw::Coloring c = a.input.load();
        const hjw::EquivKind kind = a.equiv == "alpha-iso"
                                        ? hjw::EquivKind::alpha_iso(a.base)
                                        : hjw::EquivKind::full_sym();
        const auto w = hjw::find_par_witness(c, a.size, kind, a.widen);
        found = w.has_value();
        result["witness"] = w ? par_to_json(*w) : nlohmann::json(nullptr);
    } else if (a.find == "homogeneous") {
        if (a.set_coloring_file.empty()) throw hjw::BadParams("needs --set-coloring FILE");
        const auto sc = hjw::SetColoring::from_json(load_json(a.set_coloring_file));
        const auto set = hjw::find_homogeneous(sc, a.target);
        found = set.has_value();
        result["witness"] =
            set ? nlohmann::json{{"format", 1}, {"type", "homogeneous"}, {"set", *set}}
                : nlohmann::json(nullptr);
    } else if (a.find == "ram") {
        if (a.level_coloring_file.empty()) throw hjw::BadParams("needs --level-coloring FILE");
        const auto lc = hjw::LevelColoring::from_json(load_json(a.level_coloring_file));
        const auto set = hjw::find_ram_homogeneous(lc, a.target);
        found = set.has_value();
        result["witness"] =
            set ? nlohmann::json{{"format", 1}, {"type", "ram-homogeneous"}, {"set", *set}}
                : nlohmann::json(nullptr);
    } else if (a.find == "ram-extract") {
        if (a.level_coloring_file.empty()) throw hjw::BadParams("needs --level-coloring FILE");
        const auto lc = hjw::LevelColoring::from_json(load_json(a.level_coloring_file));
        nlohmann::json trace;
        const auto set = hjw::ram_from_ramsey(lc, &trace);
        found = set.has_value();
        result["witness"] =
            set ? nlohmann::json{{"format", 1}, {"type", "ram-homogeneous"}, {"set", *set}}
                : nlohmann::json(nullptr);
        result["trace"] = trace;
    } else if (a.find == "par-alpha-extract") {
        const hjw::Coloring c = a.input.load();
        nlohmann::json trace;
        const auto w = hjw::par_alpha_extract(c, a.base, a.size, &trace);
        found = w.has_value();
        result["witness"] = w ? par_to_json(*w) : nlohmann::json(nullptr);
        result["trace"] = trace;
    } else if (a.find == "par-full-extract") {
        const hjw::Coloring c = a.input.load();
        std::vector<int> sizes;
        if (!a.sizes_csv.empty()) sizes = parse_csv_ints(a.sizes_csv);
        const auto res = hjw::par_full_extract(c, sizes);
        found = res.status == hjw::ParFullResult::Status::ok;
        result["status"] = res.status == hjw::ParFullResult::Status::ok ? "ok"
                           : res.status == hjw::ParFullResult::Status::stage_failed
                               ? "stage-failed"
                               : "final-check-failed";
        result["failed_stage"] = res.failed_stage;
        result["witness"] = found ? par_to_json(res.witness) : nlohmann::json(nullptr);
        nlohmann::json chain = nlohmann::json::array();
        for (const auto& st : res.chain)
            chain.push_back({{"letter", st.letter},
                             {"positions", st.positions},
                             {"fill", partial_to_json(st.fill)}});
        result["chain"] = std::move(chain);
        result["trace"] = res.trace;
    } else if (a.find == "hj-extract") {
        const hjw::Coloring c = a.input.load();
        std::vector<int> sizes;
        if (!a.sizes_csv.empty()) sizes = parse_csv_ints(a.sizes_csv);
        const auto res = hjw::hj_extract(c, a.dim, sizes);
        found = res.status == hjw::HjExtractResult::Status::ok;
        result["status"] = res.status == hjw::HjExtractResult::Status::ok ? "ok"
                           : res.status == hjw::HjExtractResult::Status::stage1_failed
                               ? "stage1-failed"
                           : res.status == hjw::HjExtractResult::Status::grid_failed
                               ? "grid-failed"
                               : "welldef-violation";
        result["witness"] =
            res.subspace ? subspace_to_json(*res.subspace) : nlohmann::json(nullptr);
        result["trace"] = res.trace;
    } else if (a.find == "dim-reduce") {
        const hjw::Coloring c = a.input.load();
        const auto res = hjw::hj_dim_reduce(c, a.m);
        found = res.status == hjw::DimReduceResult::Status::ok;
        result["witness"] =
            res.subspace ? nonconvex_to_json(*res.subspace) : nlohmann::json(nullptr);
        result["trace"] = res.trace;
    } else {
        throw hjw::BadParams("unknown search: " + a.find);
    }

    result["found"] = found;
    emit(a.out, result);
    return found ? kExitFound : kExitNone;
}

// --- subcommand: check -----------------------------------------------------------

struct CheckArgs {
    bool counterexample = false;
    int m = 0;
    bool invariant = false;
    std::string equiv = "full-sym";
    ColoringInput input;  // also supplies --alphabet/--base for the other modes
    std::string witness_file;
    std::string certificate_file;
    std::string headroom = "strict";
};

int run_check(const CheckArgs& a) {
    if (a.counterexample) {
        const auto rep = hjw::singleton_counterexample_check(
            a.m, hjw::Alphabet{a.input.alphabet}, a.input.base);
        if (rep) {
            std::cout << "no singleton-block subspace monochromatic\n";
            return kExitFound;
        }
        std::cout << "violation: " << subspace_to_json(rep.offender).dump() << '\n';
        return kExitNone;
    }
    if (a.invariant) {
        const hjw::Coloring c = a.input.load();
        const hjw::EquivKind kind = a.equiv == "alpha-iso"
                                        ? hjw::EquivKind::alpha_iso(a.input.base)
                                        : hjw::EquivKind::full_sym();
        const auto rep = hjw::invariant_check(c, kind);
        if (rep) {
            std::cout << "invariant holds\n";
            return kExitFound;
        }
        std::cout << "violation: related words " << nlohmann::json(rep.first).dump() << " and "
                  << nlohmann::json(rep.second).dump() << " have different colors\n";
        return kExitNone;
    }
    if (!a.certificate_file.empty()) {
        const nlohmann::json j = load_json(a.certificate_file);
        const auto kind = hjw::NumberKind::from_json(j.at("kind"));
        const std::uint64_t value = j.at("value").get<std::uint64_t>();
        if (j.at("bad_coloring").is_null()) {
            std::cout << "certificate has no bad coloring (value at search floor)\n";
            return kExitFound;
        }
        const auto cells = j.at("bad_coloring").get<std::vector<int>>();
        const auto family = hjw::build_witness_family(kind, value - 1);
        if (hjw::family_has_witness(family, cells)) {
            std::cout << "violation: recorded coloring admits a witness at size " << value - 1
                      << '\n';
            return kExitNone;
        }
        std::cout << "certificate verified: no witness at size " << value - 1 << '\n';
        return kExitFound;
    }
    if (!a.witness_file.empty()) {
        nlohmann::json j = load_json(a.witness_file);
        if (j.contains("witness")) {  // accept whole search-result files too
            if (j.at("witness").is_null()) {
                std::cout << "witness file records no witness\n";
                return kExitNone;
            }
            j = j.at("witness");
        }
        const std::string type = j.at("type").get<std::string>();
        bool ok = false;
        if (type == "subspace") {
            ok = hjw::is_mono_subspace(a.input.load(), subspace_from_json(j));
        } else if (type == "grid") {
            hjw::GridPattern g;
            g.difference = j.at("difference").get<long long>();
            g.offsets = j.at("offsets").get<std::vector<long long>>();
            g.side = j.at("side").get<int>();
            const hjw::GridHeadroom h = j.value("headroom", a.headroom) == "fit"
                                            ? hjw::GridHeadroom::fit
                                            : hjw::GridHeadroom::strict;
            ok = hjw::is_mono_grid(a.input.load(), g, h);
        } else if (type == "par") {
            const hjw::Coloring c = a.input.load();
            ok = hjw::is_par_witness(c, par_from_json(j, c.ground().length));
        } else if (type == "nonconvex") {
            ok = hjw::is_mono_nonconvex(a.input.load(), nonconvex_from_json(j));
        } else {
            throw hjw::BadParams("unknown witness type: " + type);
        }
        std::cout << (ok ? "witness valid\n" : "witness INVALID\n");
        return ok ? kExitFound : kExitNone;
    }
    throw hjw::BadParams(
        "choose one of --counterexample, --invariant, --witness, --certificate");
}

// --- subcommand: gen -------------------------------------------------------------

struct GenArgs {
    std::string type = "word";
    std::string family = "random";
    int ground = 0;
    int alphabet = 2;
    int colors = 2;
    int value = 0;
    int base = 0;
    std::uint64_t seed = 0;
    int n = 0;
    int level = 2;
    std::string out;
};

int run_gen(const GenArgs& a) {
    if (a.type == "word") {
        ColoringInput in;
        in.family = a.family;
        in.ground = a.ground;
        in.alphabet = a.alphabet;
        in.colors = a.colors;
        in.value = a.value;
        in.base = a.base;
        in.seed = a.seed;
        emit(a.out, in.load().to_json());
        return kExitFound;
    }
    if (a.type == "set") {
        const auto sc = a.family == "constant"
                            ? hjw::SetColoring::constant(a.n, a.level, hjw::ColorSet{a.colors},
                                                         a.value)
                            : hjw::SetColoring::random(a.n, a.level, hjw::ColorSet{a.colors},
                                                       a.seed);
        emit(a.out, sc.to_json());
        return kExitFound;
    }
    if (a.type == "level") {
        const auto lc = a.family == "constant"
                            ? hjw::LevelColoring::constant(a.n, a.level,
                                                           hjw::ColorSet{a.colors}, a.value)
                            : hjw::LevelColoring::random(a.n, a.level,
                                                         hjw::ColorSet{a.colors}, a.seed);
        emit(a.out, lc.to_json());
        return kExitFound;
    }
    throw hjw::BadParams("unknown gen type: " + a.type);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for partition witnesses, exact numbers, and tower bounds"};
    app.require_subcommand(1);

    ExactArgs ex;
    CLI::App* exact = app.add_subcommand("exact", "compute an exact number with certificate");
    exact->add_option("--kind", ex.kind,
                      "hj|vdw|ramsey|level-ramsey|par-alpha|par-full")->required();
    exact->add_option("--dim", ex.dim, "subspace or grid dimension");
    exact->add_option("--side", ex.side, "grid side");
    exact->add_option("--target", ex.target, "target set size");
    exact->add_option("--tuple", ex.tuple, "tuple size");
    exact->add_option("--level-bound", ex.level_bound, "homogeneity below this level");
    exact->add_option("--alphabet", ex.alphabet, "alphabet size");
    exact->add_option("--base", ex.base, "base letter");
    exact->add_option("--colors", ex.colors, "number of colors")->required();
    exact->add_option("--workers", ex.workers, "worker threads");
    exact->add_option("--budget-nodes", ex.budget_nodes, "node budget")
        ->envname("HJW_BUDGET_NODES");
    exact->add_option("--budget-seconds", ex.budget_seconds, "time budget in seconds")
        ->envname("HJW_BUDGET_SECONDS");
    exact->add_option("--checkpoint", ex.checkpoint, "checkpoint journal path");
    exact->add_option("--out", ex.out, "certificate path (empty to skip)");

    BoundArgs bo;
    CLI::App* bound = app.add_subcommand("bound", "evaluate an upper-bound expression");
    bound->add_option("--kind", bo.kind,
                      "gowers|grzegorczyk|ramsey|level-ramsey|par-alpha|par-full|hj|hj-packing")
        ->required();
    bound->add_option("-r,--r", bo.r, "color count (gowers)");
    bound->add_option("-m,--m", bo.m, "side parameter (gowers)");
    bound->add_option("--level", bo.level, "hierarchy level (grzegorczyk)");
    bound->add_option("--args", bo.args_csv, "comma-separated arguments (grzegorczyk)");
    bound->add_option("--dim", bo.dim, "subspace dimension (hj)");
    bound->add_option("--alphabet", bo.alphabet, "alphabet size");
    bound->add_option("--target", bo.target, "target size");
    bound->add_option("--tuple", bo.tuple, "tuple size (ramsey)");
    bound->add_option("--level-bound", bo.level_bound, "level bound (level-ramsey)");
    bound->add_option("--colors", bo.colors, "number of colors");
    bound->add_option("--w-value", bo.w_value, "exact grid-number value to plug in (hj)");
    bound->add_option("--max-digits", bo.max_digits, "digit budget before symbolic fallback");
    bound->add_option("--max-chars", bo.max_chars, "render cap");
    bound->add_option("--out", bo.out, "expression JSON path");

    WitnessArgs wi;
    CLI::App* witness = app.add_subcommand("witness", "search for a witness");
    witness->add_option("--find", wi.find,
                        "subspace|grid|par|homogeneous|ram|ram-extract|par-alpha-extract|"
                        "par-full-extract|hj-extract|dim-reduce")
        ->required();
    wi.input.add_flags(witness);
    witness->add_option("--set-coloring", wi.set_coloring_file, "set coloring JSON file");
    witness->add_option("--level-coloring", wi.level_coloring_file,
                        "level coloring JSON file");
    witness->add_option("--dim", wi.dim, "dimension (subspace, hj-extract)");
    witness->add_option("--side", wi.side, "grid side");
    witness->add_option("--headroom", wi.headroom, "grid headroom: strict|fit");
    witness->add_option("--size", wi.size, "witness size (par searches)");
    witness->add_option("--target", wi.target, "homogeneous set size");
    witness->add_option("--equiv", wi.equiv, "full-sym|alpha-iso");
    witness->add_option("--witness-base", wi.base, "base letter for alpha-iso");
    witness->add_flag("--widen", wi.widen, "search all injections, not just order-preserving");
    witness->add_option("--sizes", wi.sizes_csv, "per-letter stage sizes, comma-separated");
    witness->add_option("--block", wi.m, "block size (dim-reduce)");
    witness->add_option("--out", wi.out, "witness JSON path");

    CheckArgs ch;
    CLI::App* check = app.add_subcommand("check", "validate witnesses and invariants");
    check->add_flag("--counterexample", ch.counterexample,
                    "singleton-block subspaces under the parity coloring");
    check->add_option("--m", ch.m, "ground length for --counterexample");
    check->add_flag("--invariant", ch.invariant, "class-constancy of a coloring");
    check->add_option("--equiv", ch.equiv, "full-sym|alpha-iso");
    ch.input.add_flags(check);
    check->add_option("--witness", ch.witness_file, "witness JSON to re-validate");
    check->add_option("--certificate", ch.certificate_file, "certificate JSON to re-verify");
    check->add_option("--headroom", ch.headroom, "grid headroom when absent from the witness");

    GenArgs ge;
    CLI::App* gen = app.add_subcommand("gen", "emit a coloring file");
    gen->add_option("--type", ge.type, "word|set|level");
    gen->add_option("--family", ge.family, "constant|parity|random");
    gen->add_option("--ground", ge.ground, "ground length (word)");
    gen->add_option("--alphabet", ge.alphabet, "alphabet size (word)");
    gen->add_option("--colors", ge.colors, "number of colors");
    gen->add_option("--value", ge.value, "constant value");
    gen->add_option("--base", ge.base, "parity base letter");
    gen->add_option("--seed", ge.seed, "random seed");
    gen->add_option("--n", ge.n, "ground size (set/level)");
    gen->add_option("--level", ge.level, "subset size (set) or level bound (level)");
    gen->add_option("--out", ge.out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*exact) return run_exact(ex);
        if (*bound) return run_bound(bo);
        if (*witness) return run_witness(wi);
        if (*check) return run_check(ch);
        if (*gen) return run_gen(ge);
    } catch (const hjw::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 70;
    }
    return kExitUsage;
}

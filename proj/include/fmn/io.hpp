#pragma once

// File formats. All reals are written with 17 significant digits so every
// artifact round-trips exactly and reruns are byte-identical.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmn/amalgam.hpp"
#include "fmn/verify.hpp"

namespace fmn {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream iss(line);
    std::vector<std::string> out;
    std::string t;
    while (iss >> t) out.push_back(t);
    return out;
}

inline std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (!detail::tokens(line).empty()) return line;
    }
    return {};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Space files
// ---------------------------------------------------------------------------

inline void save_space(const PointSpace& s, std::ostream& out) {
    out << "fmn-space 1\n";
    out << "name " << s.name() << "\n";
    out << "kappa " << fmt17(s.kappa()) << "\n";
    out << "dim " << s.dim() << "\n";
    const char* geom = s.geometry() == SpaceGeometry::Line     ? "line"
                       : s.geometry() == SpaceGeometry::Grid   ? "grid"
                                                               : "matrix";
    out << "geometry " << geom << "\n";
    out << "dpow " << fmt17(s.dpow()) << "\n";
    out << "points " << s.size() << "\n";
    for (PointId i = 0; i < s.size(); ++i) {
        out << i;
        if (s.geometry() != SpaceGeometry::Matrix)
            for (int d = 0; d < s.dim(); ++d) out << " " << fmt17(s.coord(i, d));
        out << " " << fmt17(s.weight(i)) << "\n";
    }
    if (s.geometry() == SpaceGeometry::Matrix) {
        out << "distmatrix\n";
        for (PointId i = 0; i < s.size(); ++i) {
            for (PointId j = 0; j < s.size(); ++j)
                out << (j ? " " : "") << fmt17(s.dist(i, j));
            out << "\n";
        }
    }
}

inline PointSpace load_space(std::istream& in) {
    auto expect_kv = [&](const std::string& key) {
        auto toks = detail::tokens(detail::next_content_line(in));
        if (toks.size() < 2 || toks[0] != key)
            throw FormatError("space file: expected '" + key + "' line");
        return toks;
    };
    auto header = detail::tokens(detail::next_content_line(in));
    if (header.size() != 2 || header[0] != "fmn-space")
        throw FormatError("not a space file");
    std::string name = expect_kv("name")[1];
    double kappa = parse_real(expect_kv("kappa")[1]);
    int dim = static_cast<int>(parse_real(expect_kv("dim")[1]));
    std::string geom = expect_kv("geometry")[1];
    double dpow = parse_real(expect_kv("dpow")[1]);
    std::size_t n = static_cast<std::size_t>(parse_real(expect_kv("points")[1]));

    std::vector<double> coords, weights(n);
    if (geom != "matrix") coords.resize(n * static_cast<std::size_t>(dim));
    std::vector<char> seen(n, 0);
    for (std::size_t row = 0; row < n; ++row) {
        auto toks = detail::tokens(detail::next_content_line(in));
        std::size_t want = geom == "matrix" ? 2 : 2 + static_cast<std::size_t>(dim);
        if (toks.size() != want) throw FormatError("space file: malformed point row");
        auto id = static_cast<std::size_t>(parse_real(toks[0]));
        if (id >= n || seen[id]) throw FormatError("space file: bad point id");
        seen[id] = 1;
        if (geom != "matrix")
            for (int d = 0; d < dim; ++d)
                coords[id * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] =
                    parse_real(toks[1 + static_cast<std::size_t>(d)]);
        weights[id] = parse_real(toks.back());
    }
    if (geom == "line") return PointSpace::line(name, coords, weights, dpow, kappa);
    if (geom == "grid") return PointSpace::grid(name, coords, dim, weights, kappa);
    if (geom != "matrix") throw FormatError("space file: unknown geometry " + geom);
    auto marker = detail::tokens(detail::next_content_line(in));
    if (marker.empty() || marker[0] != "distmatrix")
        throw FormatError("space file: missing distmatrix block");
    std::vector<double> dmat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        auto toks = detail::tokens(detail::next_content_line(in));
        if (toks.size() != n) throw FormatError("space file: malformed matrix row");
        for (std::size_t j = 0; j < n; ++j) dmat[i * n + j] = parse_real(toks[j]);
    }
    return PointSpace::matrix(name, dmat, weights, kappa);
}

// ---------------------------------------------------------------------------
// Function files: (space id, point id -> re/im); missing points rejected
// ---------------------------------------------------------------------------

inline void save_function(const SampledFunction& f, std::ostream& out) {
    out << "fmn-function 1\n";
    out << "space " << f.space().name() << "\n";
    out << "id " << f.id() << "\n";
    out << "values " << f.size() << "\n";
    for (PointId i = 0; i < f.size(); ++i)
        out << i << " " << fmt17(f.value(i).real()) << " " << fmt17(f.value(i).imag())
            << "\n";
}

inline SampledFunction load_function(std::istream& in, const PointSpace& space) {
    auto header = detail::tokens(detail::next_content_line(in));
    if (header.size() != 2 || header[0] != "fmn-function")
        throw FormatError("not a function file");
    auto sp = detail::tokens(detail::next_content_line(in));
    if (sp.size() < 2 || sp[0] != "space") throw FormatError("function file: missing space");
    if (sp[1] != space.name())
        throw FormatError("function file targets space '" + sp[1] + "', not '" +
                          space.name() + "'");
    auto idline = detail::tokens(detail::next_content_line(in));
    if (idline.size() < 2 || idline[0] != "id") throw FormatError("function file: missing id");
    auto count = detail::tokens(detail::next_content_line(in));
    if (count.size() != 2 || count[0] != "values")
        throw FormatError("function file: missing values count");
    auto n = static_cast<std::size_t>(parse_real(count[1]));
    if (n != space.size()) throw FormatError("function file: value count mismatch");
    std::vector<std::complex<double>> v(space.size());
    std::vector<char> seen(space.size(), 0);
    for (std::size_t row = 0; row < n; ++row) {
        auto toks = detail::tokens(detail::next_content_line(in));
        if (toks.size() != 3) throw FormatError("function file: malformed value row");
        auto id = static_cast<std::size_t>(parse_real(toks[0]));
        if (id >= space.size() || seen[id]) throw FormatError("function file: bad point id");
        seen[id] = 1;
        v[id] = {parse_real(toks[1]), parse_real(toks[2])};
    }
    for (char c : seen)
        if (!c) throw FormatError("function file: missing point value");
    return SampledFunction(space, std::move(v), idline[1]);
}

// ---------------------------------------------------------------------------
// Cube-system dump: per generation (k, j, center id, sorted members, parent)
// ---------------------------------------------------------------------------

inline void dump_cube_system(const CubeSystem& sys, std::ostream& out) {
    out << "fmn-dyadic 1\n";
    out << "space " << sys.space().name() << "\n";
    out << "rho " << fmt17(sys.rho()) << "\n";
    out << "levels " << sys.level_count() << "\n";
    for (std::size_t li = 0; li < sys.level_count(); ++li) {
        const CubeLevel& lev = sys.level(li);
        out << "generation " << lev.k << " cubes " << lev.count() << "\n";
        const CubeLevel* coarser = li + 1 < sys.level_count() ? &sys.level(li + 1) : nullptr;
        for (std::size_t j = 0; j < lev.count(); ++j) {
            out << "cube " << lev.k << " " << j << " center " << lev.center[j] << " parent ";
            if (coarser)
                out << coarser->k << " " << lev.parent[j];
            else
                out << "none";
            out << " members";
            std::vector<PointId> mem(lev.members(j).begin(), lev.members(j).end());
            std::sort(mem.begin(), mem.end());
            for (PointId p : mem) out << " " << p;
            out << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Witness plan: JSON records with enough state to replay certification
// without rebuilding the construction
// ---------------------------------------------------------------------------

inline void save_witness_plan(const WitnessPlan& plan, std::ostream& out) {
    auto ids = [](const auto& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s + "]";
    };
    out << "{\n";
    out << "  \"n0\": " << plan.n0 << ",\n";
    out << "  \"N\": " << plan.N << ",\n";
    out << "  \"m\": " << fmt17(plan.m) << ",\n";
    out << "  \"stage1_lower\": " << fmt17(plan.stage1_lower) << ",\n";
    out << "  \"stage1_upper\": " << fmt17(plan.stage1_upper) << ",\n";
    out << "  \"all_complete\": " << (plan.all_complete ? "true" : "false") << ",\n";
    out << "  \"stages\": [\n";
    for (int n = 1; n <= plan.N; ++n) {
        const auto& st = plan.stages[static_cast<std::size_t>(n)];
        out << "    {\"n\": " << st.n << ", \"coarse_generation\": " << st.coarse_generation
            << ", \"selected\": " << ids(st.selected)
            << ", \"fine_cubes\": " << ids(st.fine_cubes)
            << ", \"avoided\": " << ids(st.avoided) << ", \"target\": " << fmt17(st.target)
            << ", \"bracket_width\": " << fmt17(st.bracket_width)
            << ", \"achieved\": " << fmt17(st.achieved)
            << ", \"complete\": " << (st.complete ? "true" : "false")
            << ", \"separation_threshold\": " << fmt17(st.separation_threshold)
            << ", \"min_separation\": "
            << (std::isfinite(st.min_separation) ? fmt17(st.min_separation) : "null")
            << ", \"max_proximity\": " << fmt17(st.max_proximity)
            << ", \"points\": " << ids(plan.stage_sets[static_cast<std::size_t>(n)]) << "}"
            << (n < plan.N ? "," : "") << "\n";
    }
    out << "  ]\n";
    out << "}\n";
}

// minimal reader for the exact shape save_witness_plan emits
inline WitnessPlan load_witness_plan(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    WitnessPlan plan;
    auto scalar = [&](const std::string& key) {
        auto pos = text.find("\"" + key + "\":");
        if (pos == std::string::npos) throw FormatError("witness plan: missing " + key);
        pos = text.find(':', pos) + 1;
        auto end = text.find_first_of(",}\n", pos);
        return detail::tokens(text.substr(pos, end - pos)).at(0);
    };
    plan.n0 = static_cast<int>(parse_real(scalar("n0")));
    plan.N = static_cast<int>(parse_real(scalar("N")));
    plan.m = parse_real(scalar("m"));
    plan.stage1_lower = parse_real(scalar("stage1_lower"));
    plan.stage1_upper = parse_real(scalar("stage1_upper"));
    plan.all_complete = scalar("all_complete") == "true";
    plan.stages.resize(static_cast<std::size_t>(plan.N) + 1);
    plan.stage_sets.resize(static_cast<std::size_t>(plan.N) + 1);

    auto list_of = [&](std::size_t from, const std::string& key) {
        auto pos = text.find("\"" + key + "\":", from);
        if (pos == std::string::npos) throw FormatError("witness plan: missing " + key);
        auto lb = text.find('[', pos), rb = text.find(']', pos);
        std::vector<std::uint32_t> out;
        std::string body = text.substr(lb + 1, rb - lb - 1);
        for (auto& tok : detail::tokens([&] {
                 std::string b = body;
                 std::replace(b.begin(), b.end(), ',', ' ');
                 return b;
             }()))
            out.push_back(static_cast<std::uint32_t>(parse_real(tok)));
        return out;
    };
    auto field_at = [&](std::size_t from, const std::string& key) {
        auto pos = text.find("\"" + key + "\":", from);
        if (pos == std::string::npos) throw FormatError("witness plan: missing " + key);
        pos = text.find(':', pos) + 1;
        auto end = text.find_first_of(",}", pos);
        auto toks = detail::tokens(text.substr(pos, end - pos));
        return toks.empty() ? std::string("0") : toks[0];
    };

    std::size_t cursor = text.find("\"stages\"");
    for (int n = 1; n <= plan.N; ++n) {
        cursor = text.find("{\"n\":", cursor);
        if (cursor == std::string::npos) throw FormatError("witness plan: missing stage");
        auto& st = plan.stages[static_cast<std::size_t>(n)];
        st.n = static_cast<int>(parse_real(field_at(cursor, "n")));
        st.coarse_generation =
            static_cast<int>(parse_real(field_at(cursor, "coarse_generation")));
        st.selected = list_of(cursor, "selected");
        st.fine_cubes = list_of(cursor, "fine_cubes");
        st.avoided = list_of(cursor, "avoided");
        st.target = parse_real(field_at(cursor, "target"));
        st.bracket_width = parse_real(field_at(cursor, "bracket_width"));
        st.achieved = parse_real(field_at(cursor, "achieved"));
        st.complete = field_at(cursor, "complete") == "true";
        st.separation_threshold = parse_real(field_at(cursor, "separation_threshold"));
        auto ms = field_at(cursor, "min_separation");
        st.min_separation = ms == "null" ? kInf : parse_real(ms);
        st.max_proximity = parse_real(field_at(cursor, "max_proximity"));
        auto pts = list_of(cursor, "points");
        plan.stage_sets[static_cast<std::size_t>(n)] = {pts.begin(), pts.end()};
        cursor = text.find('}', cursor);
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Dense kernel files
// ---------------------------------------------------------------------------

inline void save_kernel(const Kernel& k, std::ostream& out) {
    std::size_t n = k.space().size();
    out << "fmn-kernel 1\n";
    out << "size " << n << "\n";
    for (PointId x = 0; x < n; ++x) {
        for (PointId y = 0; y < n; ++y) out << (y ? " " : "") << fmt17(k.at(x, y));
        out << "\n";
    }
}

inline std::vector<double> load_kernel_entries(std::istream& in) {
    auto header = detail::tokens(detail::next_content_line(in));
    if (header.size() != 2 || header[0] != "fmn-kernel")
        throw FormatError("not a kernel file");
    auto size = detail::tokens(detail::next_content_line(in));
    if (size.size() != 2 || size[0] != "size") throw FormatError("kernel file: missing size");
    auto n = static_cast<std::size_t>(parse_real(size[1]));
    std::vector<double> entries(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        auto toks = detail::tokens(detail::next_content_line(in));
        if (toks.size() != n) throw FormatError("kernel file: malformed row");
        for (std::size_t y = 0; y < n; ++y) entries[x * n + y] = parse_real(toks[y]);
    }
    return entries;
}

inline Kernel load_kernel(std::istream& in, const PointSpace& space) {
    auto entries = load_kernel_entries(in);
    if (entries.size() != space.size() * space.size())
        throw FormatError("kernel file: size mismatch");
    return Kernel::dense(space, std::move(entries));
}

// ---------------------------------------------------------------------------
// Ledger serialization: structured text and CSV
// ---------------------------------------------------------------------------

inline void write_ledger_text(const Ledger& ledger, std::ostream& out) {
    out << "fmn-ledger 1\n";
    for (const auto& c : ledger.claims) {
        out << "claim " << c.info.id << "\n";
        out << "  kind " << c.info.kind << "\n";
        out << "  constant " << c.info.formula << "\n";
        out << "  verdict " << verdict_name(c.verdict) << "\n";
        out << "  cases " << c.cases << " failures " << c.failures << " degenerate "
            << c.degenerate << "\n";
        out << "  worst-slack " << fmt17(std::isfinite(c.worst_slack) ? c.worst_slack : 0.0)
            << "\n";
        out << "  empirical-constant " << fmt17(c.empirical_constant) << "\n";
    }
    out << "overall " << (ledger.all_pass() ? "pass" : "fail") << "\n";
}

inline void write_ledger_csv(const Ledger& ledger, std::ostream& out) {
    out << "claim,function,q,alpha,p,r,lhs,rhs,constant,slack,verdict\n";
    for (const auto& rec : ledger.records) {
        out << rec.claim << "," << rec.fn << "," << fmt17(rec.q) << "," << fmt17(rec.alpha)
            << "," << fmt17(rec.p) << "," << fmt17(rec.r) << "," << fmt17(rec.lhs) << ","
            << fmt17(rec.rhs) << "," << fmt17(rec.constant) << "," << fmt17(rec.slack) << ","
            << verdict_name(rec.verdict) << "\n";
    }
}

// norm report rows: (norm name, params, r or grid spec, value, boundary flag)
inline void write_norms_csv(const std::vector<VerifyJob>& jobs, std::ostream& out) {
    out << "norm,space,function,q,alpha,p,r,value,boundary\n";
    for (const auto& j : jobs) {
        for (const auto& f : j.corpus) {
            for (NormParams P : {NormParams(1, 2, 4), NormParams(1, 2, kInf)}) {
                auto v = fractional_mean_norm(f, P, j.r_grid);
                out << "fractional-mean," << j.space->name() << "," << f.id() << ","
                    << fmt17(P.q) << "," << fmt17(P.alpha) << "," << fmt17(P.p) << ","
                    << fmt17(v.r) << "," << fmt17(v.value) << ","
                    << (v.boundary_flag ? 1 : 0) << "\n";
            }
        }
    }
}

inline void write_plot_csv(const std::vector<VerifyJob>& jobs,
                           const std::vector<NormParams>& params, std::ostream& out) {
    out << "space,function,q,alpha,p,r,value\n";
    for (const auto& j : jobs)
        for (const auto& f : j.corpus)
            for (const auto& P : params)
                for (double r : j.r_grid)
                    out << j.space->name() << "," << f.id() << "," << fmt17(P.q) << ","
                        << fmt17(P.alpha) << "," << fmt17(P.p) << "," << fmt17(r) << ","
                        << fmt17(amalgam_norm_r(f, P, r).value) << "\n";
}

}  // namespace fmn

// Command-line front end: compute, render, export, batch-audit.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "khv/audit.hpp"
#include "khv/catalog.hpp"
#include "khv/cube.hpp"
#include "khv/errors.hpp"
#include "khv/jones.hpp"
#include "khv/lee.hpp"
#include "khv/scan.hpp"

namespace fs = std::filesystem;
using namespace khv;

namespace {

struct InputOpts {
  std::string catalog;
  std::string pd_file;
  std::string braid;
  int strands = 0;
};

void add_input_flags(CLI::App* cmd, InputOpts& in) {
  cmd->add_option("--catalog", in.catalog, "bundled knot name");
  cmd->add_option("--pd", in.pd_file, "PD code file");
  cmd->add_option("--braid", in.braid, "braid word, e.g. 1,1,1 or 1 -2");
  cmd->add_option("--strands", in.strands, "strand count for --braid");
}

std::vector<int> parse_braid_word(const std::string& text) {
  std::vector<int> word;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, ',')) {
    std::istringstream ts(tok);
    std::string part;
    while (ts >> part) {
      try {
        size_t used = 0;
        int v = std::stoi(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
        word.push_back(v);
      } catch (...) {
        throw ParseError("bad braid letter '" + part + "'");
      }
    }
  }
  return word;
}

knotio::Diagram load_input(const InputOpts& in) {
  int sources = (!in.catalog.empty()) + (!in.pd_file.empty()) +
                (!in.braid.empty());
  if (sources != 1)
    throw ValidationError("need exactly one of --catalog, --pd, --braid");
  if (!in.catalog.empty()) return knotio::catalog_get(in.catalog);
  if (!in.pd_file.empty()) {
    std::ifstream f(in.pd_file);
    if (!f) throw ParseError("cannot open " + in.pd_file);
    std::stringstream buf;
    buf << f.rdbuf();
    return knotio::parse_pd(buf.str());
  }
  if (in.strands < 2) throw ValidationError("--braid requires --strands");
  auto d = knotio::from_braid(parse_braid_word(in.braid), in.strands);
  if (!d.is_knot())
    std::cerr << "warning: braid closure has " << d.components()
              << " components\n";
  return d;
}

struct Budgets {
  int max_direct = khcomplex::kDefaultDirectBudget;
  double time_sec = 0;
  long mem_mb = 0;
  std::string checkpoint;
  int threads = 0;
  bool verbose = false;
};

void add_budget_flags(CLI::App* cmd, Budgets& b) {
  cmd->add_option("--max-direct", b.max_direct,
                  "crossing cap for the direct cube");
  cmd->add_option("--budget-time", b.time_sec, "time budget in seconds");
  cmd->add_option("--budget-mem", b.mem_mb, "memory budget in MB");
  cmd->add_option("--checkpoint", b.checkpoint, "scan checkpoint path");
  cmd->add_option("--threads", b.threads, "worker threads (batch)");
  cmd->add_flag("--verbose", b.verbose, "progress output on stderr");
}

int default_threads(const Budgets& b) {
  if (b.threads > 0) return b.threads;
  if (const char* env = std::getenv("KHV_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

grading::DimTable compute_kh(const knotio::Diagram& d, const Budgets& b) {
  if (static_cast<int>(d.size()) <= b.max_direct)
    return khcomplex::khovanov_homology(d, b.max_direct);
  scan::ScanOptions opts;
  opts.time_budget_sec = b.time_sec;
  opts.mem_budget_mb = b.mem_mb;
  opts.checkpoint_path = b.checkpoint;
  if (b.verbose) opts.progress = &std::cerr;
  return scan::reduced_kh(d, opts);
}

void print_table(const grading::DimTable& t, const std::string& format) {
  if (format == "grid")
    std::cout << t.render_grid();
  else if (format == "json")
    std::cout << t.to_json() << "\n";
  else if (format == "csv")
    std::cout << t.to_csv();
  else
    throw ValidationError("unknown format: " + format);
}

struct BatchRow {
  std::string name;
  std::string status = "ok";
  int crossings = 0;
  std::string s_origin;
  int s = 0;
  std::string verdict;
  std::string witness;
  int forced_n = 0;
  std::string flag;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov homology, Lee pages and knight-move audits"};
  app.require_subcommand(1);

  InputOpts in;
  Budgets bud;
  std::string format = "grid";
  int s_flag = INT32_MIN;
  std::string table_file;
  std::string batch_dir;
  std::string batch_out;

  auto* kh = app.add_subcommand("kh", "bigraded homology table");
  add_input_flags(kh, in);
  add_budget_flags(kh, bud);
  kh->add_option("--format", format, "grid|json|csv");

  auto* lee_cmd = app.add_subcommand("lee", "spectral sequence pages and s");
  add_input_flags(lee_cmd, in);
  add_budget_flags(lee_cmd, bud);
  lee_cmd->add_option("--format", format, "text|json");

  auto* audit_cmd = app.add_subcommand("audit", "knight move audit");
  add_input_flags(audit_cmd, in);
  add_budget_flags(audit_cmd, bud);
  audit_cmd->add_option("--table", table_file, "imported DimTable JSON");
  audit_cmd->add_option("--s", s_flag, "s-invariant for table-only audits");
  audit_cmd->add_option("--format", format, "text|json");

  auto* alex_cmd = app.add_subcommand("alexander", "Alexander + Fox-Milnor");
  add_input_flags(alex_cmd, in);

  auto* jones_cmd = app.add_subcommand("jones", "unnormalized Jones");
  add_input_flags(jones_cmd, in);

  auto* batch_cmd = app.add_subcommand("batch", "audit a corpus directory");
  batch_cmd->add_option("dir", batch_dir, "directory of .pd files")
      ->required();
  batch_cmd->add_option("--out", batch_out, "summary CSV path (default out)");
  batch_cmd->add_option("--s", s_flag, "fallback s for beyond-budget knots");
  add_budget_flags(batch_cmd, bud);

  auto* cat_cmd = app.add_subcommand("catalog", "list bundled knots");
  std::string cat_name;
  cat_cmd->add_option("name", cat_name, "print this entry's PD code");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*kh) {
      auto d = load_input(in);
      print_table(compute_kh(d, bud), format);
    } else if (*lee_cmd) {
      auto d = load_input(in);
      if (static_cast<int>(d.size()) > bud.max_direct)
        throw BudgetError(
            "diagram beyond the direct budget; pages need the filtered cube "
            "(use the table-level audit instead)");
      auto c = khcomplex::build_complex(d, khcomplex::Theory::Lee,
                                        bud.max_direct);
      lee::LeeResult r;
      r.pages = lee::compute_pages(c);
      r.s = lee::s_invariant(r.pages);
      auto kh2 = khcomplex::khovanov_homology(d, bud.max_direct);
      auto dec = lee::decomposition_from_pages(r.pages,
                                               kh2.poincare_series());
      if (format == "json")
        std::cout << lee::report_json(r, dec) << "\n";
      else
        std::cout << lee::report_text(r, dec);
    } else if (*audit_cmd) {
      grading::DimTable table;
      std::optional<knotio::Diagram> diag;
      if (!table_file.empty()) {
        std::ifstream f(table_file);
        if (!f) throw ParseError("cannot open " + table_file);
        std::stringstream buf;
        buf << f.rdbuf();
        table = grading::DimTable::from_json(buf.str());
        if (s_flag == INT32_MIN)
          throw ValidationError("table-only audit needs --s");
      } else {
        diag = load_input(in);
        table = compute_kh(*diag, bud);
      }
      audit::AuditReport rep;
      if (diag && static_cast<int>(diag->size()) <= bud.max_direct) {
        auto c = khcomplex::build_complex(*diag, khcomplex::Theory::Lee,
                                          bud.max_direct);
        auto pages = lee::compute_pages(c);
        rep.s = lee::s_invariant(pages);
        rep.km = audit::knight_move_solve(table.poincare_series(), rep.s);
        rep.certificates = audit::higher_diff_certificate(table, rep.s);
        rep.unknotting_bound = audit::unknotting_lower_bound(pages);
      } else {
        if (s_flag == INT32_MIN)
          throw ValidationError(
              "diagram beyond the direct budget: supply --s for the "
              "table-level audit");
        rep.s = s_flag;
        rep.km = audit::knight_move_solve(table.poincare_series(), rep.s);
        rep.certificates = audit::higher_diff_certificate(table, rep.s);
        rep.unknotting_bound =
            audit::unknotting_lower_bound(rep.certificates);
      }
      if (diag) rep.alex = audit::alexander(*diag);
      if (format == "json")
        std::cout << audit::report_json(rep) << "\n";
      else
        std::cout << audit::report_text(rep);
    } else if (*alex_cmd) {
      auto d = load_input(in);
      auto a = audit::alexander(d);
      std::cout << "Delta = " << a.delta.str("t") << "\n";
      switch (a.fox_milnor.verdict) {
        case audit::FoxMilnorResult::Verdict::Passes:
          std::cout << "Fox-Milnor: passes with f = "
                    << a.fox_milnor.factor.str("t") << "\n";
          break;
        case audit::FoxMilnorResult::Verdict::Fails:
          std::cout << "Fox-Milnor: fails\n";
          break;
        case audit::FoxMilnorResult::Verdict::Undecided:
          std::cout << "Fox-Milnor: undecided (span > "
                    << a.fox_milnor.span_bound << ")\n";
          break;
      }
    } else if (*jones_cmd) {
      auto d = load_input(in);
      std::cout << grading::kauffman_jones(d).str() << "\n";
    } else if (*batch_cmd) {
      std::vector<fs::path> files;
      for (auto& e : fs::directory_iterator(batch_dir))
        if (e.path().extension() == ".pd") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      std::vector<BatchRow> rows(files.size());
      std::atomic<size_t> cursor{0};
      std::mutex errmtx;
      auto worker = [&]() {
        for (;;) {
          size_t k = cursor.fetch_add(1);
          if (k >= files.size()) return;
          BatchRow& row = rows[k];
          row.name = files[k].stem().string();
          try {
            std::ifstream f(files[k]);
            std::stringstream buf;
            buf << f.rdbuf();
            auto d = knotio::parse_pd(buf.str());
            row.crossings = static_cast<int>(d.size());
            auto table = compute_kh(d, bud);
            int s;
            std::vector<audit::Certificate> certs;
            if (static_cast<int>(d.size()) <= bud.max_direct) {
              auto c = khcomplex::build_complex(d, khcomplex::Theory::Lee,
                                                bud.max_direct);
              auto pages = lee::compute_pages(c);
              s = lee::s_invariant(pages);
              row.s_origin = "lee";
            } else {
              s = s_flag == INT32_MIN ? 0 : s_flag;
              row.s_origin = "flag";
            }
            row.s = s;
            auto km = audit::knight_move_solve(table.poincare_series(), s);
            row.verdict = km.holds ? "holds" : "fails";
            if (!km.holds) {
              row.witness = "(" + std::to_string(km.witness.first) + ";" +
                            std::to_string(km.witness.second) + ")";
              certs = audit::higher_diff_certificate(table, s);
              for (auto& c2 : certs) row.forced_n = std::max(row.forced_n, c2.n);
              if (row.forced_n >= 2) row.flag = "FORCED_D" +
                                                std::to_string(row.forced_n);
            }
          } catch (const Error& e) {
            row.status = "error";
            row.verdict = "";
            std::lock_guard<std::mutex> lk(errmtx);
            std::cerr << row.name << ": " << e.what() << "\n";
          }
        }
      };
      int nthreads = default_threads(bud);
      std::vector<std::thread> pool;
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      std::ostream* out = &std::cout;
      std::ofstream fout;
      if (!batch_out.empty()) {
        fout.open(batch_out);
        out = &fout;
      }
      *out << "name,crossings,status,s,s_origin,verdict,witness,flag\n";
      for (auto& r : rows)
        *out << r.name << "," << r.crossings << "," << r.status << "," << r.s
             << "," << r.s_origin << "," << r.verdict << "," << r.witness
             << "," << r.flag << "\n";
    } else if (*cat_cmd) {
      if (cat_name.empty()) {
        for (auto& n : knotio::catalog_names()) std::cout << n << "\n";
      } else {
        std::cout << knotio::catalog_get(cat_name).pd_text() << "\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Internal);
  }
  return 0;
}

#include "qfb/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "qfb/brauer.hpp"
#include "qfb/clifford.hpp"
#include "qfb/etale.hpp"
#include "qfb/integer.hpp"
#include "qfb/local.hpp"
#include "qfb/parse.hpp"
#include "qfb/pipeline.hpp"
#include "qfb/selftest.hpp"

namespace qfb {

namespace {

using Json = nlohmann::ordered_json;

struct CliConfig {
  std::string command;
  std::string sub;
  std::string field;
  std::string form, form2, ext, psi, psi2, symbols, symbols2, v, v2;
  std::vector<std::string> positional;
  std::string format;  // empty: the command's default
  std::uint64_t seed = 0;
  std::size_t scale = 1;
  PipelineBounds bounds;
  bool no_split = false;
  bool compact = false;
};

struct Output {
  Json json;
  std::ostringstream human;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

FieldPtr field_or_default(const CliConfig& c) { return parse_field(c.field.empty() ? "Q" : c.field); }

QuadraticForm form_over(const FieldPtr& F, const std::string& text, const char* what) {
  if (text.empty()) throw Error(Errc::Parse, std::string("missing ") + what);
  return QuadraticForm(F, parse_form_entries(F, text));
}

// "K x K" (or "split" with --field K) is the split algebra; anything else must
// parse to a quadratic extension.
EtaleExtension parse_ext(const CliConfig& c) {
  const std::string s = trim(c.ext);
  if (s.empty()) throw Error(Errc::Parse, "missing --ext");
  if (s == "split") return EtaleExtension::split(field_or_default(c));
  if (auto x = s.find(" x "); x != std::string::npos) {
    FieldPtr F = parse_field(trim(s.substr(0, x)));
    FieldPtr G = parse_field(trim(s.substr(x + 3)));
    if (!F->same_as(*G)) throw Error(Errc::FieldMismatch, "split algebra needs equal factors: " + s);
    return EtaleExtension::split(F);
  }
  FieldPtr L = parse_field(s);
  if (L->kind() != FieldKind::QuadExt) throw Error(Errc::Parse, s + " is not a quadratic extension");
  EtaleExtension E = EtaleExtension::of_field(L);
  if (!c.field.empty() && !parse_field(c.field)->same_as(*E.base()))
    throw Error(Errc::FieldMismatch, "--field " + c.field + " is not the base of " + s);
  return E;
}

EtaleForm etale_form(const EtaleExtension& E, const std::string& a, const std::string& b) {
  if (!E.is_split()) return EtaleForm::of(E, form_over(E.field(), a, "form over the extension"));
  return EtaleForm::of(E, form_over(E.base(), a, "first component"), form_over(E.base(), b, "second component"));
}

std::vector<Elem> parse_vector(const FieldPtr& F, const std::string& text) {
  std::string s = trim(text);
  if (s.size() >= 2 && ((s.front() == '(' && s.back() == ')') || (s.front() == '[' && s.back() == ']')))
    s = s.substr(1, s.size() - 2);
  std::vector<Elem> out;
  int depth = 0;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      if (!trim(cur).empty()) out.push_back(parse_elem(F, cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

Json symbols_json(const BrauerClass2& c) {
  Json a = Json::array();
  for (const auto& [x, y] : c.symbols) a.push_back({x.str(), y.str()});
  return a;
}

int cmd_classify(const CliConfig& c, Output& o) {
  FieldPtr F = field_or_default(c);
  QuadraticForm phi = form_over(F, c.form, "--form");
  ClassificationReport r = classify(phi);
  o.json["field"] = F->str();
  o.json["form"] = phi.str();
  o.json["dim"] = r.dim;
  o.json["signed_discriminant"] = r.signed_discriminant.valid() ? r.signed_discriminant.str() : "";
  o.json["discriminant_trivial"] = r.discriminant_trivial;
  BrauerClass2 cl = r.clifford.field ? simplified(r.clifford) : BrauerClass2{};
  o.json["clifford"] = cl.field ? cl.str() : "";
  o.json["clifford_symbols"] = cl.field ? symbols_json(cl) : Json::array();
  o.json["index"] = r.index;
  o.json["branch"] = branch_name(r.branch);
  o.json["note"] = r.note;
  o.human << "form      " << phi.str() << "\n"
          << "dim       " << r.dim << "\n"
          << "disc      " << (r.signed_discriminant.valid() ? r.signed_discriminant.str() : "-")
          << (r.discriminant_trivial ? " (trivial)" : "") << "\n";
  if (cl.field) o.human << "clifford  " << cl.str() << "\nindex     " << r.index << "\n";
  o.human << "branch    " << branch_name(r.branch) << "\n";
  if (!r.note.empty()) o.human << "note      " << r.note << "\n";
  return r.branch == Branch::NotApplicable ? exit_code::not_applicable : exit_code::ok;
}

Json presentation_json(const TransferPresentation& T) {
  Json j;
  j["extension"] = T.psi.ext.str();
  j["split"] = T.psi.ext.is_split();
  j["d"] = T.psi.ext.d().str();
  j["psi"] = T.psi.str();
  if (T.psi.ext.is_split()) j["components"] = {T.psi.component(0).str(), T.psi.component(1).str()};
  Json g = Json::array();
  for (const auto& p : T.gp2) g.push_back({{"ell", p.ell.str()}, {"alpha", p.alpha.str()}, {"beta", p.beta.str()}});
  j["gp2"] = g;
  j["scale"] = T.scale.valid() ? T.scale.str() : "1";
  j["transfer"] = transfer(T.psi).str();
  j["route"] = T.route;
  return j;
}

int cmd_construct(const CliConfig& c, Output& o) {
  FieldPtr F = field_or_default(c);
  QuadraticForm phi = form_over(F, c.form, "--form");
  ClassificationReport r = classify(phi);
  o.json["field"] = F->str();
  o.json["form"] = phi.str();
  o.json["branch"] = branch_name(r.branch);
  o.json["index"] = r.index;
  if (r.branch == Branch::NotApplicable) {
    o.json["note"] = r.note;
    o.human << "not applicable: " << r.note << "\n";
    return exit_code::not_applicable;
  }
  PipelineBounds b = c.bounds;
  b.allow_split = !c.no_split;
  TransferPresentation T = construct_presentation(phi, b);
  PresentationCheck chk = verify_presentation(phi, T);
  o.json["presentation"] = presentation_json(T);
  o.json["verified"] = chk.ok;
  o.json["reasons"] = chk.reasons;
  o.human << "branch     " << branch_name(r.branch) << "\n"
          << "extension  " << T.psi.ext.str() << "\n"
          << "psi        " << T.psi.str() << "\n"
          << "transfer   " << transfer(T.psi).str() << "\n"
          << "route      " << T.route << "\n"
          << "verified   " << (chk.ok ? "yes" : "no") << "\n";
  for (const auto& why : chk.reasons) o.human << "  " << why << "\n";
  return chk.ok ? exit_code::ok : exit_code::assertion;
}

int cmd_verify(const CliConfig& c, Output& o) {
  EtaleExtension E = parse_ext(c);
  QuadraticForm phi = form_over(E.base(), c.form, "--form");
  TransferPresentation T{etale_form(E, c.psi, c.psi2), {}, E.base()->one(), "given"};
  PresentationCheck chk = verify_presentation(phi, T);
  o.json["field"] = E.base()->str();
  o.json["form"] = phi.str();
  o.json["extension"] = E.str();
  o.json["psi"] = T.psi.str();
  o.json["ok"] = chk.ok;
  o.json["reasons"] = chk.reasons;
  o.human << (chk.ok ? "ok" : "rejected") << "\n";
  for (const auto& why : chk.reasons) o.human << "  " << why << "\n";
  return chk.ok ? exit_code::ok : exit_code::assertion;
}

int cmd_transfer(const CliConfig& c, Output& o) {
  EtaleExtension E = parse_ext(c);
  EtaleForm psi = etale_form(E, c.form, c.form2);
  QuadraticForm t = transfer(psi);
  Json entries = Json::array();
  for (const auto& x : t.entries()) entries.push_back(x.str());
  o.json["extension"] = E.str();
  o.json["psi"] = psi.str();
  o.json["transfer"] = t.str();
  o.json["entries"] = entries;
  o.human << t.str() << "\n";
  return exit_code::ok;
}

int cmd_hilbert(const CliConfig& c, Output& o) {
  if (c.positional.size() != 3) throw Error(Errc::Parse, "hilbert needs: a b p");
  FieldPtr F = field_or_default(c);
  Elem a = parse_elem(F, c.positional[0]), b = parse_elem(F, c.positional[1]);
  const std::string& ps = c.positional[2];
  mpz_class p;
  if (ps == "inf" || ps == "infinity" || ps == "oo") {
    p = 0;
  } else if (p.set_str(ps, 10) != 0 || p < 0) {
    throw Error(Errc::Parse, "bad place '" + ps + "': want a prime or inf");
  }
  if (p != 0 && !is_probable_prime(p)) throw Error(Errc::Parse, ps + " is not prime");
  std::vector<Place> places = places_above(*F, p);
  Json arr = Json::array();
  for (const auto& w : places) {
    int s = hilbert_symbol(*F, a, b, w);
    arr.push_back({{"place", w.str()}, {"symbol", s}});
    if (places.size() == 1)
      o.human << s << "\n";
    else
      o.human << w.str() << " " << s << "\n";
  }
  o.json["field"] = F->str();
  o.json["a"] = a.str();
  o.json["b"] = b.str();
  o.json["places"] = arr;
  return exit_code::ok;
}

int cmd_brauer(const CliConfig& c, Output& o) {
  o.json["subcommand"] = c.sub;
  if (c.sub == "index") {
    FieldPtr F = field_or_default(c);
    BrauerClass2 cls(F, parse_symbols(F, c.symbols));
    long idx = index(cls);
    o.json["field"] = F->str();
    o.json["class"] = cls.str();
    o.json["index"] = idx;
    BrauerClass2 reduced = simplified(cls);
    if (reduced.symbols.size() <= 2) {
      QuadraticForm alb = albert_form(reduced);
      o.json["albert_form"] = alb.str();
      o.json["albert_index"] = index_via_albert(reduced);
    } else {
      o.json["albert_form"] = nullptr;
      o.json["albert_index"] = nullptr;
    }
    o.human << idx << "\n";
    return exit_code::ok;
  }
  // cores: corestriction from the extension down to its base
  EtaleExtension E = parse_ext(c);
  EtaleBrauerClass ec{E, {}, {}};
  if (E.is_split()) {
    ec.first = BrauerClass2(E.base(), parse_symbols(E.base(), c.symbols));
    ec.second = BrauerClass2(E.base(), parse_symbols(E.base(), c.symbols2.empty() ? "[]" : c.symbols2));
  } else {
    ec.first = BrauerClass2(E.field(), parse_symbols(E.field(), c.symbols));
  }
  BrauerClass2 cor = simplified(corestriction(ec));
  o.json["extension"] = E.str();
  o.json["corestriction"] = cor.str();
  o.json["corestriction_symbols"] = symbols_json(cor);
  o.json["index"] = index(cor);
  try {
    o.json["projection"] = simplified(corestriction_projection(ec)).str();
  } catch (const Error& e) {
    if (e.code() != Errc::RewriteFailed) throw;
    o.json["projection"] = nullptr;
  }
  o.human << cor.str() << "\n";
  return exit_code::ok;
}

int cmd_verify_lemma(const CliConfig& c, Output& o) {
  VerificationReport rep;
  if (c.sub == "etale") {
    FieldPtr F = field_or_default(c);
    QuadraticForm p = form_over(F, c.form, "--form"), p2 = form_over(F, c.form2, "--form2");
    auto pick = [&](const QuadraticForm& q, const std::string& text) {
      if (!text.empty()) return parse_vector(F, text);
      std::vector<Elem> v(q.dim(), F->zero());
      if (!v.empty()) v[0] = F->one();
      return v;
    };
    rep = verify_lemma_etale(p, p2, pick(p, c.v), pick(p2, c.v2));
  } else {
    EtaleExtension E = parse_ext(c);
    if (E.is_split()) throw Error(Errc::PreconditionViolated, "the switch needs a field extension");
    rep = verify_switch_fixed_points(form_over(E.field(), c.form, "--form"), c.seed);
  }
  Json checks = Json::array();
  for (const auto& k : rep.checks) checks.push_back({{"name", k.name}, {"ok", k.ok}, {"detail", k.detail}});
  o.json["subject"] = rep.subject;
  o.json["passed"] = rep.passed();
  o.json["checks"] = checks;
  o.human << rep.str();
  return rep.passed() ? exit_code::ok : exit_code::assertion;
}

int cmd_selftest(const CliConfig& c, Output& o, std::ostream& err, bool json) {
  std::vector<SuiteResult> rs = run_selftest({c.seed, c.scale});
  Json arr = Json::array();
  bool ok = true;
  std::ostringstream table;
  table << "suite                         cases  fail  skip\n";
  for (const auto& r : rs) {
    ok = ok && r.failures == 0;
    arr.push_back({{"name", r.name},
                   {"cases", r.cases},
                   {"failures", r.failures},
                   {"skipped", r.skipped},
                   {"first_failure", r.first_failure}});
    std::string name = r.name;
    name.resize(28, ' ');
    table << name << "  " << std::setw(5) << r.cases << " " << std::setw(5) << r.failures << " " << std::setw(5)
          << r.skipped << "\n";
    if (!r.first_failure.empty()) table << "    first failure: " << r.first_failure << "\n";
  }
  table << (ok ? "all suites passed\n" : "FAILURES\n");
  o.json["seed"] = c.seed;
  o.json["scale"] = c.scale;
  o.json["suites"] = arr;
  o.json["passed"] = ok;
  o.human << table.str();
  // With JSON on stdout the table still goes somewhere a person can see it.
  if (json) err << table.str();
  return ok ? exit_code::ok : exit_code::assertion;
}

int code_for(Errc e) {
  switch (e) {
    case Errc::Parse:
    case Errc::FieldMismatch:
    case Errc::ZeroInput:
    case Errc::WrongShape:
    case Errc::DegenerateBlock:
      return exit_code::parse;
    case Errc::SearchExhausted:
    case Errc::WitnessSearchExhausted:
    case Errc::FactorizationLimit:
      return exit_code::search_exhausted;
    case Errc::PreconditionViolated:
    case Errc::UnsupportedTower:
    case Errc::UnsupportedPlace:
    case Errc::NormalizationImpossible:
    case Errc::NotDivisible:
    case Errc::RewriteFailed:
      return exit_code::not_applicable;
    default:
      return exit_code::assertion;
  }
}

bool default_json(const std::string& cmd) {
  return cmd == "classify" || cmd == "construct" || cmd == "verify" || cmd == "selftest";
}

int run_one(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err, bool in_batch);

int run_batch(std::istream& in, std::ostream& out, std::ostream& err) {
  int first = exit_code::ok;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    int rc;
    try {
      rc = run_one(split_command_line(t), in, out, err, true);
    } catch (const Error& e) {
      err << "line " << lineno << ": " << e.what() << "\n";
      rc = exit_code::parse;
    }
    if (rc != exit_code::ok && first == exit_code::ok) first = rc;
  }
  return first;
}

int run_one(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err, bool in_batch) {
  CliConfig c;
  CLI::App app{"Quadratic forms, Brauer classes and transfers over exact field towers", "qfb"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  };
  auto with_field = [&](CLI::App* s) { s->add_option("--field", c.field, "Base field descriptor (default Q)"); };
  auto with_bounds = [&](CLI::App* s) {
    s->add_option("--max-pfister-slots", c.bounds.max_pfister_slots, "Candidates a for <<a>> q");
    s->add_option("--max-extensions", c.bounds.max_extensions, "Candidate quadratic extensions");
    s->add_option("--max-quaternion-classes", c.bounds.max_quaternion_classes, "Square classes used for slots");
    s->add_option("--max-scalars", c.bounds.max_scalars, "Scalars tried for psi");
    s->add_option("--mu-height", c.bounds.mu_height, "Height of extra small elements");
    s->add_option("--witness", c.bounds.witness.small_elements, "Small elements per witness search");
    s->add_flag("--no-split", c.no_split, "Only field extensions in the transfer-needed branch");
  };

  auto* classify_cmd = app.add_subcommand("classify", "Invariants and pipeline branch of an 8-dimensional form");
  with_field(classify_cmd);
  classify_cmd->add_option("--form", c.form, "Form literal")->required();
  common(classify_cmd);

  auto* construct_cmd = app.add_subcommand("construct", "Find (L, psi) with phi = transfer of psi");
  with_field(construct_cmd);
  construct_cmd->add_option("--form", c.form, "Form literal")->required();
  with_bounds(construct_cmd);
  common(construct_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check a presentation phi = transfer of psi");
  with_field(verify_cmd);
  verify_cmd->add_option("--form", c.form, "phi over the base field")->required();
  verify_cmd->add_option("--ext", c.ext, "Extension: \"K(sqrt d)\" or \"K x K\"")->required();
  verify_cmd->add_option("--psi", c.psi, "psi over L (first component when split)")->required();
  verify_cmd->add_option("--psi2", c.psi2, "Second component when split");
  common(verify_cmd);

  auto* transfer_cmd = app.add_subcommand("transfer", "Trace transfer of a form over an etale extension");
  with_field(transfer_cmd);
  transfer_cmd->add_option("--ext", c.ext, "Extension: \"K(sqrt d)\" or \"K x K\"")->required();
  transfer_cmd->add_option("--form", c.form, "Form over L (first component when split)")->required();
  transfer_cmd->add_option("--form2", c.form2, "Second component when split");
  common(transfer_cmd);

  auto* hilbert_cmd = app.add_subcommand("hilbert", "Hilbert symbol (a, b) at the places above p");
  with_field(hilbert_cmd);
  hilbert_cmd->add_option("args", c.positional, "a b p (p prime or inf)")->expected(3);
  common(hilbert_cmd);

  auto* brauer_cmd = app.add_subcommand("brauer", "2-torsion Brauer classes");
  brauer_cmd->require_subcommand(1);
  auto* index_cmd = brauer_cmd->add_subcommand("index", "Index of a sum of quaternion symbols");
  with_field(index_cmd);
  index_cmd->add_option("--symbols", c.symbols, "\"(a,b) + (c,d)\"")->required();
  common(index_cmd);
  auto* cores_cmd = brauer_cmd->add_subcommand("cores", "Corestriction to the base field");
  with_field(cores_cmd);
  cores_cmd->add_option("--ext", c.ext, "Extension: \"K(sqrt d)\" or \"K x K\"")->required();
  cores_cmd->add_option("--symbols", c.symbols, "Class over L (first component when split)")->required();
  cores_cmd->add_option("--symbols2", c.symbols2, "Second component when split");
  common(cores_cmd);

  auto* lemma_cmd = app.add_subcommand("verify-lemma", "Machine-check the Clifford algebra identities");
  lemma_cmd->require_subcommand(1);
  auto* etale_cmd = lemma_cmd->add_subcommand("etale", "Generators of C_0(phi + phi') and the tensor embedding");
  with_field(etale_cmd);
  etale_cmd->add_option("--form", c.form, "phi")->required();
  etale_cmd->add_option("--form2", c.form2, "phi'")->required();
  etale_cmd->add_option("--v", c.v, "Anisotropic vector of phi (default e1)");
  etale_cmd->add_option("--v2", c.v2, "Anisotropic vector of phi' (default e1)");
  common(etale_cmd);
  auto* switch_cmd = lemma_cmd->add_subcommand("switch", "Fixed points of the switch on C(psi + conj psi)");
  with_field(switch_cmd);
  switch_cmd->add_option("--ext", c.ext, "Quadratic extension L")->required();
  switch_cmd->add_option("--form", c.form, "psi over L")->required();
  switch_cmd->add_option("--seed", c.seed, "Seed for the random multiplicativity checks");
  common(switch_cmd);

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the property suites");
  selftest_cmd->add_option("--seed", c.seed, "Seed (default 0)");
  selftest_cmd->add_option("--scale", c.scale, "Multiply the case counts")->check(CLI::PositiveNumber);
  common(selftest_cmd);

  auto* batch_cmd = app.add_subcommand("batch", "Read one command per line from stdin");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    return exit_code::usage;
  }

  if (batch_cmd->parsed()) {
    if (in_batch) {
      err << "usage: batch cannot be nested\n";
      return exit_code::usage;
    }
    return run_batch(in, out, err);
  }

  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  if (!sub->get_subcommands().empty()) c.sub = sub->get_subcommands().front()->get_name();
  const bool json = c.format.empty() ? default_json(c.command) : c.format == "json";
  c.compact = in_batch;

  Output o;
  o.json["schema"] = 1;
  o.json["command"] = c.sub.empty() ? c.command : c.command + " " + c.sub;
  int rc;
  try {
    if (c.command == "classify") rc = cmd_classify(c, o);
    else if (c.command == "construct") rc = cmd_construct(c, o);
    else if (c.command == "verify") rc = cmd_verify(c, o);
    else if (c.command == "transfer") rc = cmd_transfer(c, o);
    else if (c.command == "hilbert") rc = cmd_hilbert(c, o);
    else if (c.command == "brauer") rc = cmd_brauer(c, o);
    else if (c.command == "verify-lemma") rc = cmd_verify_lemma(c, o);
    else rc = cmd_selftest(c, o, err, json);
  } catch (const Error& e) {
    rc = code_for(e.code());
    Json j;
    j["schema"] = 1;
    j["command"] = o.json["command"];
    j["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    j["exit"] = rc;
    if (json) out << j.dump(c.compact ? -1 : 2) << "\n";
    err << "error: " << e.what() << "\n";
    return rc;
  }
  o.json["exit"] = rc;
  if (json)
    out << o.json.dump(c.compact ? -1 : 2) << "\n";
  else
    out << o.human.str();
  return rc;
}

}  // namespace

std::vector<std::string> split_command_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool have = false;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quote) {
      if (ch == quote) quote = 0;
      else cur += ch;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      have = true;
    } else if (ch == ' ' || ch == '\t') {
      if (have) out.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur += ch;
      have = true;
    }
  }
  if (quote) throw ParseError(line.size(), "unterminated quote");
  if (have) out.push_back(cur);
  return out;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    return run_one(args, in, out, err, false);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::assertion;
  }
}

}  // namespace qfb

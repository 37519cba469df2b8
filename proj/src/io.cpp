#include "gentle/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gentle::cli {

simp::CrewPtr crew_from_json(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains("basepoint") || !j.contains("simplices"))
    throw input_error("crew JSON needs 'basepoint' and 'simplices'");
  auto c = std::make_shared<simp::Crew>();
  c->name = name;
  const json& simplices = j.at("simplices");
  std::size_t maxq = 0;
  for (auto it = simplices.begin(); it != simplices.end(); ++it) {
    std::size_t q = std::stoul(it.key());
    maxq = std::max(maxq, q);
  }
  c->labels.assign(maxq + 1, {});
  c->faces.assign(maxq + 1, {});
  std::map<std::string, std::pair<uint32_t, uint32_t>> index;
  for (auto it = simplices.begin(); it != simplices.end(); ++it) {
    std::size_t q = std::stoul(it.key());
    for (const json& s : it.value()) {
      std::string lbl = s.at("name").get<std::string>();
      if (index.count(lbl)) throw input_error("duplicate simplex name '" + lbl + "'");
      index[lbl] = {static_cast<uint32_t>(q), static_cast<uint32_t>(c->labels[q].size())};
      c->labels[q].push_back(lbl);
    }
  }
  for (auto it = simplices.begin(); it != simplices.end(); ++it) {
    std::size_t q = std::stoul(it.key());
    for (const json& s : it.value()) {
      if (q == 0) continue;
      std::vector<simp::Enc> fs;
      if (!s.contains("faces") || s.at("faces").size() != q + 1)
        throw input_error("simplex '" + s.at("name").get<std::string>() + "' needs " + std::to_string(q + 1) +
                          " faces");
      for (const json& f : s.at("faces")) {
        simp::Word w;
        for (const json& x : f.at("word")) w.push_back(static_cast<uint8_t>(x.get<int>()));
        std::string target = f.at("target").get<std::string>();
        auto itt = index.find(target);
        if (itt == index.end()) throw input_error("face target '" + target + "' is not a simplex");
        fs.push_back(simp::Enc{w, itt->second.first, itt->second.second});
      }
      c->faces[q].push_back(std::move(fs));
    }
  }
  std::string bp = j.at("basepoint").get<std::string>();
  auto itb = index.find(bp);
  if (itb == index.end() || itb->second.first != 0) throw input_error("basepoint '" + bp + "' is not a vertex");
  c->basepoint = itb->second.second;
  auto violations = c->validate();
  if (!violations.empty()) {
    std::string msg = "crew validation failed:";
    for (auto& v : violations) msg += " [" + v.simplex + ": " + v.detail + "]";
    throw input_error(msg);
  }
  return c;
}

json crew_to_json(const simp::Crew& c) {
  json j;
  j["basepoint"] = c.labels[0][c.basepoint];
  json simplices = json::object();
  for (std::size_t q = 0; q < c.labels.size(); ++q) {
    if (c.labels[q].empty()) continue;
    json list = json::array();
    for (std::size_t i = 0; i < c.labels[q].size(); ++i) {
      json s;
      s["name"] = c.labels[q][i];
      if (q >= 1) {
        json faces = json::array();
        for (const auto& f : c.faces[q][i]) {
          json fj;
          fj["word"] = json::array();
          for (auto w : f.w) fj["word"].push_back(static_cast<int>(w));
          fj["target"] = c.labels[f.tdim][f.tidx];
          faces.push_back(fj);
        }
        s["faces"] = faces;
      }
      list.push_back(s);
    }
    simplices[std::to_string(q)] = list;
  }
  j["simplices"] = simplices;
  return j;
}

ch::ChainComplex complex_from_json(const json& j) {
  ch::ChainComplex c;
  c.p = j.at("p").get<uint32_t>();
  gf::PrimeField F(c.p);
  std::size_t maxq = 0;
  for (auto it = j.at("ranks").begin(); it != j.at("ranks").end(); ++it)
    maxq = std::max(maxq, static_cast<std::size_t>(std::stoul(it.key())));
  c.ranks.assign(maxq + 1, 0);
  for (auto it = j.at("ranks").begin(); it != j.at("ranks").end(); ++it)
    c.ranks[std::stoul(it.key())] = it.value().get<std::size_t>();
  for (std::size_t q = 0; q <= maxq; ++q) c.d.emplace_back(c.p, q == 0 ? 0 : c.ranks[q - 1], c.ranks[q]);
  if (j.contains("d")) {
    for (auto it = j.at("d").begin(); it != j.at("d").end(); ++it) {
      std::size_t q = std::stoul(it.key());
      if (q == 0 || q > maxq) throw input_error("differential index out of range");
      const json& rows = it.value();
      if (rows.size() != c.ranks[q - 1]) throw input_error("differential row count mismatch");
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != c.ranks[q]) throw input_error("differential column count mismatch");
        for (std::size_t cc = 0; cc < rows[r].size(); ++cc)
          c.d[q].at(r, cc) = F.reduce_int(rows[r][cc].get<long long>());
      }
    }
  }
  c.validate();
  return c;
}

json complex_to_json(const ch::ChainComplex& c) {
  json j;
  j["p"] = c.p;
  json ranks = json::object();
  for (std::size_t q = 0; q < c.ranks.size(); ++q) ranks[std::to_string(q)] = c.ranks[q];
  j["ranks"] = ranks;
  json d = json::object();
  for (std::size_t q = 1; q < c.ranks.size(); ++q) {
    json rows = json::array();
    for (std::size_t r = 0; r < c.d[q].rows; ++r) {
      json row = json::array();
      for (std::size_t cc = 0; cc < c.d[q].cols; ++cc) row.push_back(c.d[q].at(r, cc));
      rows.push_back(row);
    }
    d[std::to_string(q)] = rows;
  }
  j["d"] = d;
  return j;
}

ch::ComplexMap complex_map_from_json(const json& j, const ch::ChainComplex& src, const ch::ChainComplex& dst) {
  if (src.p != dst.p) throw input_error("complex map endpoints disagree on the prime");
  gf::PrimeField F(src.p);
  ch::ComplexMap m;
  m.src = &src;
  m.dst = &dst;
  std::size_t top = std::max(src.ranks.size(), dst.ranks.size());
  for (std::size_t q = 0; q < top; ++q) m.f.emplace_back(src.p, dst.rank(q), src.rank(q));
  if (j.contains("f")) {
    for (auto it = j.at("f").begin(); it != j.at("f").end(); ++it) {
      std::size_t q = std::stoul(it.key());
      if (q >= top) throw input_error("complex map degree out of range");
      const json& rows = it.value();
      if (rows.size() != dst.rank(q)) throw input_error("complex map row count mismatch in degree " + it.key());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != src.rank(q))
          throw input_error("complex map column count mismatch in degree " + it.key());
        for (std::size_t c = 0; c < rows[r].size(); ++c)
          m.f[q].at(r, c) = F.reduce_int(rows[r][c].get<long long>());
      }
    }
  }
  m.validate();
  return m;
}

json complex_map_to_json(const ch::ComplexMap& m) {
  json j;
  json f = json::object();
  for (std::size_t q = 0; q < m.f.size(); ++q) {
    if (m.f[q].rows == 0 || m.f[q].cols == 0) continue;
    json rows = json::array();
    for (std::size_t r = 0; r < m.f[q].rows; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.f[q].cols; ++c) row.push_back(m.f[q].at(r, c));
      rows.push_back(row);
    }
    f[std::to_string(q)] = rows;
  }
  j["f"] = f;
  return j;
}

std::vector<uint32_t> invariant_from_json(const json& j, const simp::Pi0& classes) {
  if (!j.contains("values")) throw input_error("invariant JSON needs 'values'");
  const json& values = j.at("values");
  std::vector<uint32_t> out(classes.class_count(), 0);
  std::vector<bool> seen(classes.class_count(), false);
  for (auto it = values.begin(); it != values.end(); ++it) {
    bool found = false;
    for (uint32_t c = 0; c < classes.class_count(); ++c) {
      if (classes.class_name(c) == it.key()) {
        out[c] = static_cast<uint32_t>(((it.value().get<long long>() % classes.slice.p) + classes.slice.p) %
                                       classes.slice.p);
        seen[c] = true;
        found = true;
        break;
      }
    }
    if (!found) throw input_error("invariant names unknown class representative '" + it.key() + "'");
  }
  std::vector<std::string> missing;
  for (uint32_t c = 0; c < classes.class_count(); ++c)
    if (!seen[c]) missing.push_back(classes.class_name(c));
  if (!missing.empty()) throw input_error("invariant table is missing classes: " + join(missing, ", "));
  return out;
}

json invariant_to_json(const simp::Pi0& classes, const std::vector<uint32_t>& values) {
  json j;
  json v = json::object();
  for (uint32_t c = 0; c < classes.class_count(); ++c) v[classes.class_name(c)] = values[c];
  j["values"] = v;
  return j;
}

grp::GroupPtr group_from_json(const json& j) {
  if (j.contains("cyclic_orders")) {
    std::vector<uint32_t> orders;
    for (const json& o : j.at("cyclic_orders")) orders.push_back(o.get<uint32_t>());
    return grp::abelian_group(orders);
  }
  if (j.contains("elements") && j.contains("table")) {
    std::vector<std::string> labels;
    for (const json& e : j.at("elements")) labels.push_back(e.get<std::string>());
    std::vector<uint32_t> table;
    for (const json& row : j.at("table"))
      for (const json& v : row) table.push_back(v.get<uint32_t>());
    return grp::group_from_table("file-group", std::move(labels), std::move(table));
  }
  throw input_error("group JSON needs 'cyclic_orders' or 'elements'+'table'");
}

grp::GroupFunction group_function_from_json(const json& j, grp::GroupPtr g) {
  grp::GroupFunction f;
  f.domain = g;
  f.codomain_p = j.at("p").get<uint32_t>();
  gf::PrimeField F(f.codomain_p);
  f.values.assign(g->size(), 0);
  std::vector<bool> seen(g->size(), false);
  for (auto it = j.at("values").begin(); it != j.at("values").end(); ++it) {
    auto idx = g->elements()->index(it.key());
    if (!idx) throw input_error("function names unknown element '" + it.key() + "'");
    f.values[*idx] = F.reduce_int(it.value().get<long long>());
    seen[*idx] = true;
  }
  for (std::size_t i = 0; i < g->size(); ++i)
    if (!seen[i]) throw input_error("function table is missing element '" + g->elements()->label(i) + "'");
  return f;
}

namespace {

// split "a,b,c" at top level (not inside parentheses)
std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

simp::Target ResolvedRef::target() const {
  return module ? simp::module_target(module) : simp::crew_target(crew);
}

ResolvedRef resolve_ref(const std::string& ref, std::size_t module_cap, const Caps& caps) {
  ResolvedRef out;
  out.canonical = ref;
  if (ref == "point") {
    out.crew = simp::point_crew();
    return out;
  }
  if (ref.rfind("sphere:", 0) == 0) {
    out.crew = simp::sphere(static_cast<uint32_t>(std::stoul(ref.substr(7))));
    return out;
  }
  if (ref.rfind("em:", 0) == 0) {
    auto args = split_args(ref.substr(3));
    if (args.size() != 2) throw input_error("em ref needs em:p,n");
    out.module = simp::em_module(static_cast<uint32_t>(std::stoul(args[0])),
                                 static_cast<uint32_t>(std::stoul(args[1])), module_cap);
    return out;
  }
  if (ref.rfind("wedge:(", 0) == 0 && ref.back() == ')') {
    auto args = split_args(ref.substr(7, ref.size() - 8));
    std::vector<simp::CrewPtr> summands;
    for (auto& a : args) {
      ResolvedRef r = resolve_ref(a, module_cap, caps);
      if (r.is_module()) throw input_error("wedge summands must be crews");
      summands.push_back(r.crew);
    }
    out.crew = simp::wedge(summands).crew;
    return out;
  }
  if (ref.rfind("power:(", 0) == 0 && ref.back() == ')') {
    auto args = split_args(ref.substr(7, ref.size() - 8));
    if (args.size() != 2) throw input_error("power ref needs power:(ref,r)");
    ResolvedRef base = resolve_ref(args[0], module_cap, caps);
    if (base.is_module()) throw input_error("power base must be a crew");
    out.crew = simp::power(base.crew, static_cast<uint32_t>(std::stoul(args[1])), caps).crew;
    return out;
  }
  if (ref.rfind("cyl:", 0) == 0) {
    ResolvedRef base = resolve_ref(ref.substr(4), module_cap, caps);
    if (base.is_module()) throw input_error("cylinder base must be a crew");
    out.crew = simp::reduced_cylinder(base.crew, caps).crew;
    return out;
  }
  if (ref.rfind("file:", 0) == 0) {
    std::string path = ref.substr(5);
    std::ifstream in(path);
    if (!in) throw input_error("cannot open crew file '" + path + "'");
    json j = json::parse(in, nullptr, true, true);
    out.crew = crew_from_json(j, path);
    return out;
  }
  throw input_error("unresolved reference '" + ref + "'");
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json caps_to_json(const Caps& c) {
  json j;
  j["r_max"] = c.r_max;
  j["dim_cap"] = c.dim_cap;
  j["max_simplices"] = c.max_simplices;
  j["max_maps"] = c.max_maps;
  j["group_cap"] = c.group_cap;
  return j;
}

json Report::to_json() const {
  json j;
  j["tool"] = "gentle";
  j["command"] = command;
  j["seed"] = seed;
  j["caps"] = caps_to_json(caps);
  json list = json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["details"] = c.details;
    list.push_back(cj);
    if (c.pass) ++passed;
  }
  j["checks"] = list;
  j["summary"] = {{"total", checks.size()}, {"passed", passed}};
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "gentle: " << command << " (seed " << seed << ")\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " (" << c.ms << " ms)";
    if (!c.pass && !c.details.is_null()) os << "  " << c.details.dump();
    os << "\n";
    if (c.pass) ++passed;
  }
  os << passed << "/" << checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace gentle::cli

#include "pipg/io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace pipg::io {

using presheaf::ElemId;
using presheaf::Kind;
using presheaf::Object;
using presheaf::Presheaf;

std::string print_presheaf(const Presheaf& p, const std::string& name) {
  std::ostringstream os;
  os << "PRESHEAF " << name << "\n";
  os << "CHANNELS";
  for (ElemId c : p.channels()) os << " " << c;
  os << "\n";
  for (ElemId a : p.agents()) {
    const auto& e = p.at(a);
    os << "AGENT " << a << " " << e.obj.n;
    for (ElemId c : e.faces) os << " " << c;
    os << "\n";
  }
  for (const auto& [id, e] : p.elements()) {
    if (e.obj.dimension() < 2) continue;
    os << "ELEM " << e.obj.tag() << " " << id;
    for (std::size_t k = 0; k < e.faces.size(); ++k) os << " " << e.obj.face_name(k) << "=" << e.faces[k];
    os << "\n";
  }
  os << "END\n";
  return os.str();
}

std::string print_cospan(const traces::TraceCospan& c) {
  std::ostringstream os;
  os << print_presheaf(c.x, "X") << print_presheaf(c.y, "Y") << print_presheaf(c.u, "U");
  for (const auto& [y, u] : c.s) os << "LEG S: " << c.y.at(y).obj.tag() << " " << y << "->" << u << "\n";
  for (const auto& [x, u] : c.t) os << "LEG T: " << c.x.at(x).obj.tag() << " " << x << "->" << u << "\n";
  return os.str();
}

namespace {

ElemId number(std::size_t line, const std::string& s) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos)
    throw FormatError(line, "expected an element id, got '" + s + "'");
  return static_cast<ElemId>(std::stoul(s));
}

void put_checked(Presheaf& p, std::size_t line, ElemId id, const Object& o, std::vector<ElemId> faces) {
  if (p.contains(id)) throw FormatError(line, "element " + std::to_string(id) + " defined twice");
  p.put(id, o, std::move(faces));
}

}  // namespace

traces::TraceCospan parse_cospan(const std::string& text) {
  traces::TraceCospan c;
  std::map<std::string, Presheaf*> sections{{"X", &c.x}, {"Y", &c.y}, {"U", &c.u}};
  std::map<std::string, bool> seen;
  Presheaf* cur = nullptr;
  bool have_s = false, have_t = false;
  std::vector<std::tuple<std::size_t, bool, std::string, ElemId, ElemId>> legs;

  std::istringstream is(text);
  std::string raw;
  for (std::size_t no = 1; std::getline(is, raw); ++no) {
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> w;
    for (std::string t; ls >> t;) w.push_back(t);
    if (w.empty()) continue;
    const std::string& kw = w[0];
    if (kw == "PRESHEAF") {
      if (cur) throw FormatError(no, "PRESHEAF inside a section");
      if (w.size() != 2 || !sections.count(w[1])) throw FormatError(no, "expected PRESHEAF X|Y|U");
      if (seen[w[1]]) throw FormatError(no, "section " + w[1] + " given twice");
      seen[w[1]] = true;
      cur = sections[w[1]];
    } else if (kw == "END") {
      if (!cur) throw FormatError(no, "END outside a section");
      cur = nullptr;
    } else if (kw == "CHANNELS") {
      if (!cur) throw FormatError(no, "CHANNELS outside a section");
      for (std::size_t i = 1; i < w.size(); ++i) put_checked(*cur, no, number(no, w[i]), Object::star(), {});
    } else if (kw == "AGENT") {
      if (!cur) throw FormatError(no, "AGENT outside a section");
      if (w.size() < 3) throw FormatError(no, "expected AGENT id arity channels...");
      ElemId id = number(no, w[1]);
      ElemId n = number(no, w[2]);
      if (n > 1000 || w.size() != 3 + n) throw FormatError(no, "agent arity does not match its channel list");
      std::vector<ElemId> faces;
      for (std::size_t i = 3; i < w.size(); ++i) faces.push_back(number(no, w[i]));
      put_checked(*cur, no, id, Object::agent(n), std::move(faces));
    } else if (kw == "ELEM") {
      if (!cur) throw FormatError(no, "ELEM outside a section");
      if (w.size() < 3) throw FormatError(no, "expected ELEM tag id faces...");
      auto o = Object::parse_tag(w[1]);
      if (!o || o->dimension() < 2) throw FormatError(no, "bad element tag '" + w[1] + "'");
      ElemId id = number(no, w[2]);
      std::vector<std::optional<ElemId>> faces(o->face_count());
      for (std::size_t i = 3; i < w.size(); ++i) {
        auto eq = w[i].find('=');
        if (eq == std::string::npos) throw FormatError(no, "expected face=id");
        std::string fname = w[i].substr(0, eq);
        std::size_t k = 0;
        while (k < faces.size() && o->face_name(k) != fname) ++k;
        if (k == faces.size()) throw FormatError(no, "unknown face '" + fname + "' for " + w[1]);
        if (faces[k]) throw FormatError(no, "face '" + fname + "' given twice");
        faces[k] = number(no, w[i].substr(eq + 1));
      }
      std::vector<ElemId> fs;
      for (std::size_t k = 0; k < faces.size(); ++k) {
        if (!faces[k]) throw FormatError(no, "face '" + o->face_name(k) + "' missing");
        fs.push_back(*faces[k]);
      }
      put_checked(*cur, no, id, *o, std::move(fs));
    } else if (kw == "LEG") {
      if (cur) throw FormatError(no, "LEG inside a section");
      if (w.size() != 4 || (w[1] != "S:" && w[1] != "T:")) throw FormatError(no, "expected LEG S|T: tag src->dst");
      auto arrow = w[3].find("->");
      if (arrow == std::string::npos) throw FormatError(no, "expected src->dst");
      bool is_s = w[1] == "S:";
      (is_s ? have_s : have_t) = true;
      legs.emplace_back(no, is_s, w[2], number(no, w[3].substr(0, arrow)), number(no, w[3].substr(arrow + 2)));
    } else {
      throw FormatError(no, "unknown keyword '" + kw + "'");
    }
  }
  if (cur) throw FormatError(0, "unterminated section");
  for (const char* s : {"X", "Y", "U"})
    if (!seen[s]) throw FormatError(0, std::string("missing section ") + s);
  for (const auto& [no, is_s, tag, src, dst] : legs) {
    const Presheaf& from = is_s ? c.y : c.x;
    if (!from.contains(src)) throw FormatError(no, "leg source " + std::to_string(src) + " not in its section");
    if (from.at(src).obj.tag() != tag) throw FormatError(no, "leg tag does not match element " + std::to_string(src));
    auto& leg = is_s ? c.s : c.t;
    if (leg.count(src)) throw FormatError(no, "element " + std::to_string(src) + " mapped twice");
    leg[src] = dst;
  }
  if (!have_s)
    for (const auto& [id, e] : c.y.elements()) c.s[id] = id;
  if (!have_t)
    for (const auto& [id, e] : c.x.elements()) c.t[id] = id;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace pipg::io

#include "delib/scenario_io.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "delib/model.hpp"

namespace delib {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
  size_t pos = s.find('#');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

double parse_number(const std::string& text, int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin || trim(std::string(end)) != "") {
    throw ParseError("expected a number, got '" + text + "'", line, "");
  }
  return value;
}

std::pair<double, double> parse_pair(const std::string& text, int line) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw ParseError("expected [a, b], got '" + text + "'", line, "");
  }
  std::string inner = t.substr(1, t.size() - 2);
  size_t comma = inner.find(',');
  if (comma == std::string::npos ||
      inner.find(',', comma + 1) != std::string::npos) {
    throw ParseError("expected exactly two comma-separated numbers", line, "");
  }
  return {parse_number(trim(inner.substr(0, comma)), line),
          parse_number(trim(inner.substr(comma + 1)), line)};
}

struct MatrixSlots {
  std::optional<double> e00, e01, e10, e11;

  bool any() const { return e00 || e01 || e10 || e11; }
  bool complete() const { return e00 && e01 && e10 && e11; }
  PayoffMatrix matrix() const { return {*e00, *e01, *e10, *e11}; }
};

void assign_entry(MatrixSlots& slots, char prefix, const std::string& key,
                  double value, int line) {
  static const std::map<std::string, int> suffixes = {
      {"00", 0}, {"01", 1}, {"10", 2}, {"11", 3}};
  if (key.size() != 3 || key[0] != prefix ||
      suffixes.find(key.substr(1)) == suffixes.end()) {
    throw ParseError("unknown key '" + key + "'", line, "");
  }
  std::optional<double>* slot = nullptr;
  switch (suffixes.at(key.substr(1))) {
    case 0: slot = &slots.e00; break;
    case 1: slot = &slots.e01; break;
    case 2: slot = &slots.e10; break;
    case 3: slot = &slots.e11; break;
  }
  if (*slot) throw ParseError("duplicate key '" + key + "'", line, "");
  *slot = value;
}

}  // namespace

ScenarioDoc parse_scenario_text(const std::string& text,
                                const std::string& source_name) {
  ScenarioDoc doc;
  MatrixSlots principal, agent;
  std::optional<double> q0, q1;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("unterminated section header", line_no, "");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "principal" && section != "agent" &&
          section != "agent_signal" && section != "constraint") {
        throw ParseError("unknown section [" + section + "]", line_no, "");
      }
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value", line_no, "");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line_no, "");

    if (section.empty()) {
      if (key != "prior") {
        throw ParseError("unknown top-level key '" + key + "'", line_no, "");
      }
      if (doc.prior) throw ParseError("duplicate key 'prior'", line_no, "");
      doc.prior = parse_number(value, line_no);
    } else if (section == "principal") {
      assign_entry(principal, 'r', key, parse_number(value, line_no), line_no);
    } else if (section == "agent") {
      assign_entry(agent, 'v', key, parse_number(value, line_no), line_no);
    } else if (section == "agent_signal") {
      std::optional<double>* slot =
          key == "q0" ? &q0 : (key == "q1" ? &q1 : nullptr);
      if (!slot) throw ParseError("unknown key '" + key + "'", line_no, "");
      if (*slot) throw ParseError("duplicate key '" + key + "'", line_no, "");
      *slot = parse_number(value, line_no);
    } else {  // constraint
      if (key == "posteriors") {
        if (doc.constraint_posteriors) {
          throw ParseError("duplicate key 'posteriors'", line_no, "");
        }
        doc.constraint_posteriors = parse_pair(value, line_no);
      } else if (key == "signal") {
        if (doc.constraint_signal) {
          throw ParseError("duplicate key 'signal'", line_no, "");
        }
        doc.constraint_signal = parse_pair(value, line_no);
      } else {
        throw ParseError("unknown key '" + key + "'", line_no, "");
      }
    }
  }

  auto finish_matrix = [&](const MatrixSlots& slots, const std::string& field,
                           char prefix) -> std::optional<PayoffMatrix> {
    if (!slots.any()) return std::nullopt;
    if (!slots.complete()) {
      throw ParseError(std::string("incomplete payoff matrix; need ") + prefix +
                           "00, " + prefix + "01, " + prefix + "10, " + prefix +
                           "11",
                       0, field);
    }
    return slots.matrix();
  };
  doc.principal = finish_matrix(principal, "principal", 'r');
  doc.agent = finish_matrix(agent, "agent", 'v');
  if (q0 || q1) {
    if (!q0 || !q1) {
      throw ParseError("need both q0 and q1", 0, "agent_signal");
    }
    doc.agent_q = std::make_pair(*q0, *q1);
  }
  if (doc.constraint_posteriors && doc.constraint_signal) {
    throw ParseError("give either posteriors or signal, not both", 0,
                     "constraint");
  }
  (void)source_name;
  return doc;
}

ScenarioDoc parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'", 0, "file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

namespace {

void require(bool present, const char* field) {
  if (!present) {
    throw ParseError("missing required section or key", 0, field);
  }
}

}  // namespace

std::pair<Preferences, BinarySignal> build_witness_inputs(const ScenarioDoc& doc) {
  require(doc.principal.has_value(), "principal");
  require(doc.agent.has_value(), "agent");
  require(doc.agent_q.has_value(), "agent_signal");
  Preferences prefs{*doc.principal, *doc.agent};
  BinarySignal signal(doc.agent_q->first, doc.agent_q->second);
  return {prefs, signal};
}

Scenario build_scenario(const ScenarioDoc& doc) {
  auto [prefs, signal] = build_witness_inputs(doc);
  require(doc.prior.has_value(), "prior");
  require(doc.constraint_posteriors.has_value() ||
              doc.constraint_signal.has_value(),
          "constraint");
  Scenario s;
  s.prior = *doc.prior;
  s.prefs = prefs;
  s.agent_signal = signal;
  if (doc.constraint_posteriors) {
    s.constraint = {doc.constraint_posteriors->first,
                    doc.constraint_posteriors->second};
  } else {
    BinarySignal cap(doc.constraint_signal->first, doc.constraint_signal->second);
    PosteriorPair reach = posteriors_of_signal(s.prior, cap);
    s.constraint = {reach.low, reach.high};
  }
  return s;
}

}  // namespace delib

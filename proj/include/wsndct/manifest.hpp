#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsndct/error.hpp"

namespace wsndct {

// Sectioned key-value text, the run-manifest/config format:
//
//   [section]
//   key = value
//
// Order is preserved so serialization is byte-stable. '#' starts a comment.
class Manifest {
 public:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  void set(std::string_view section, std::string_view key, std::string_view value) {
    Section& s = section_for(section);
    for (auto& e : s.entries) {
      if (e.key == key) {
        e.value = std::string(value);
        return;
      }
    }
    s.entries.push_back(Entry{std::string(key), std::string(value)});
  }

  const std::string* find(std::string_view section, std::string_view key) const {
    for (const auto& s : sections_) {
      if (s.name != section) continue;
      for (const auto& e : s.entries)
        if (e.key == key) return &e.value;
    }
    return nullptr;
  }

  std::string get(std::string_view section, std::string_view key) const {
    const std::string* v = find(section, key);
    if (v == nullptr)
      throw ConfigError("manifest: missing key [" + std::string(section) + "] " +
                        std::string(key));
    return *v;
  }

  std::optional<std::string> get_optional(std::string_view section, std::string_view key) const {
    const std::string* v = find(section, key);
    return v == nullptr ? std::nullopt : std::optional<std::string>(*v);
  }

  const std::vector<Section>& sections() const { return sections_; }

  std::string serialize() const {
    std::string out;
    for (std::size_t i = 0; i < sections_.size(); ++i) {
      if (i > 0) out += '\n';
      out += '[';
      out += sections_[i].name;
      out += "]\n";
      for (const auto& e : sections_[i].entries) {
        out += e.key;
        out += " = ";
        out += e.value;
        out += '\n';
      }
    }
    return out;
  }

  static Manifest parse(std::string_view text) {
    Manifest m;
    std::string current;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;

      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3)
          throw ConfigError("manifest: malformed section header at line " +
                            std::to_string(line_no));
        current = std::string(trim(line.substr(1, line.size() - 2)));
        m.section_for(current);
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError("manifest: expected `key = value` at line " + std::to_string(line_no));
      if (current.empty())
        throw ConfigError("manifest: entry before any section at line " + std::to_string(line_no));
      const std::string_view key = trim(line.substr(0, eq));
      const std::string_view value = trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigError("manifest: empty key at line " + std::to_string(line_no));
      m.set(current, key, value);
    }
    return m;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }

  Section& section_for(std::string_view name) {
    for (auto& s : sections_)
      if (s.name == name) return s;
    sections_.push_back(Section{std::string(name), {}});
    return sections_.back();
  }

  std::vector<Section> sections_;
};

}  // namespace wsndct

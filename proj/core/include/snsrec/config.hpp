#ifndef SNSREC_CONFIG_HPP
#define SNSREC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>

namespace snsrec::cfg {

// Flat key=value configuration with [section] headers mapping to
// "section.key" entries. CLI overrides are applied with set().
class KvConfig {
 public:
  static KvConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  long get_long(const std::string& key, long dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;

  // Serializes back into sectioned key=value form for provenance.
  void write(const std::string& path) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace snsrec::cfg

#endif

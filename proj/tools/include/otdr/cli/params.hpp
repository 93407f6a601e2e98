#pragma once

#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace otdr::cli {

// Typed parameter table behind one subcommand. Every parameter has a default
// in JSON form; the effective value is default <- config file section <- flag.
// The effective table is what gets echoed to config.json.
class ParamSet {
 public:
  ParamSet(CLI::App* app, std::string section) : app_(app), section_(std::move(section)) {}

  // Flag is "--" + key with '_' shown as '-'. Booleans get a "--no-" twin.
  void add(const std::string& key, nlohmann::json default_value, const std::string& help);
  void add_positional(const std::string& key, nlohmann::json default_value, const std::string& help);

  const std::string& section() const noexcept { return section_; }
  CLI::App* app() const noexcept { return app_; }

  // Overlays the config file section then the flags given on the command line.
  nlohmann::json resolve(const nlohmann::json& config_file) const;

 private:
  struct Entry {
    nlohmann::json default_value;
    CLI::Option* option = nullptr;
    std::string text;
    bool flag = false;
    bool flag_value = false;
  };

  static nlohmann::json convert(const std::string& key, const nlohmann::json& like, const std::string& text);
  static nlohmann::json check_type(const std::string& key, const nlohmann::json& like, const nlohmann::json& v);

  CLI::App* app_;
  std::string section_;
  std::map<std::string, std::unique_ptr<Entry>> entries_;
  std::vector<std::string> order_;
};

}  // namespace otdr::cli

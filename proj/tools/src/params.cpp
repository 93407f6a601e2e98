#include "otdr/cli/params.hpp"

#include <algorithm>
#include <charconv>

#include "otdr/error.hpp"

namespace otdr::cli {

namespace {

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

std::string default_text(const nlohmann::json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

void ParamSet::add(const std::string& key, nlohmann::json default_value, const std::string& help) {
  auto e = std::make_unique<Entry>();
  e->default_value = std::move(default_value);
  const std::string name = flag_name(key);
  if (e->default_value.is_boolean()) {
    e->flag = true;
    e->option = app_->add_flag("--" + name + ",!--no-" + name, e->flag_value, help)
                    ->default_str(e->default_value.get<bool>() ? "true" : "false");
  } else {
    e->option = app_->add_option("--" + name, e->text, help)->default_str(default_text(e->default_value));
  }
  order_.push_back(key);
  entries_.emplace(key, std::move(e));
}

void ParamSet::add_positional(const std::string& key, nlohmann::json default_value, const std::string& help) {
  auto e = std::make_unique<Entry>();
  e->default_value = std::move(default_value);
  e->option = app_->add_option(key, e->text, help);
  order_.push_back(key);
  entries_.emplace(key, std::move(e));
}

nlohmann::json ParamSet::check_type(const std::string& key, const nlohmann::json& like, const nlohmann::json& v) {
  auto bad = [&] { return ConfigError("parameter '" + key + "' expects " + std::string(like.type_name()) + ", got " + v.dump()); };
  if (like.is_boolean()) {
    if (!v.is_boolean()) throw bad();
  } else if (like.is_number_unsigned() || like.is_number_integer()) {
    if (!v.is_number_integer()) throw bad();
    if (like.is_number_unsigned() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) throw bad();
  } else if (like.is_number()) {
    if (!v.is_number()) throw bad();
    return v.get<double>();
  } else if (like.is_string()) {
    if (!v.is_string()) throw bad();
  }
  return v;
}

nlohmann::json ParamSet::convert(const std::string& key, const nlohmann::json& like, const std::string& text) {
  auto bad = [&] { return ConfigError("parameter '" + key + "' expects " + std::string(like.type_name()) + ", got '" + text + "'"); };
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (like.is_number_unsigned()) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) throw bad();
    return v;
  }
  if (like.is_number_integer()) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) throw bad();
    return v;
  }
  if (like.is_number()) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) throw bad();
    return v;
  }
  return text;
}

nlohmann::json ParamSet::resolve(const nlohmann::json& config_file) const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& key : order_) out[key] = entries_.at(key)->default_value;

  if (config_file.contains(section_)) {
    const auto& sec = config_file.at(section_);
    if (!sec.is_object()) throw ConfigError("config section '" + section_ + "' must be an object");
    for (const auto& [k, v] : sec.items()) {
      const auto it = entries_.find(k);
      if (it == entries_.end()) throw ConfigError("unknown key '" + k + "' in config section '" + section_ + "'");
      out[k] = check_type(k, it->second->default_value, v);
    }
  }

  for (const auto& key : order_) {
    const auto& e = *entries_.at(key);
    if (e.option->count() == 0) continue;
    out[key] = e.flag ? nlohmann::json(e.flag_value) : convert(key, e.default_value, e.text);
  }
  return out;
}

}  // namespace otdr::cli

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace prefrec {

// Flat key = value run configuration with command-line overrides applied.
class RunConfig {
public:
    static RunConfig from_file(const std::string& path);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> require_vector(const std::string& key) const;
    std::vector<double> get_vector(const std::string& key, std::vector<double> fallback) const;
    std::vector<std::size_t> require_sizes(const std::string& key) const;

    // Hash of the canonical sorted key=value listing; recorded in every output.
    std::string hash() const;

private:
    std::map<std::string, std::string> kv_;
};

// Exit codes: 0 success, 2 validation error, 3 I/O error, 4 internal
// contract violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prefrec

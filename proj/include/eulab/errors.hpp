#ifndef EULAB_ERRORS_HPP
#define EULAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eulab {

// Malformed external input (JSON, rationals, node strings, CLI payloads).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or depth cap was exceeded; the caller chose a problem size the
// engines refuse rather than silently crawl.
class cap_error : public std::runtime_error {
public:
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

// A precondition of a checked inequality does not hold for the given instance.
// `clause` names the violated hypothesis.
class hypothesis_error : public std::invalid_argument {
public:
    hypothesis_error(const std::string& clause, const std::string& what)
        : std::invalid_argument(clause + ": " + what), clause_(clause) {}
    const std::string& clause() const { return clause_; }

private:
    std::string clause_;
};

// A checked property failed on a concrete instance; `instance_json` carries a
// reproducible dump of the offender.
class property_violation : public std::runtime_error {
public:
    property_violation(const std::string& what, std::string instance_json)
        : std::runtime_error(what), instance_json_(std::move(instance_json)) {}
    const std::string& instance_json() const { return instance_json_; }

private:
    std::string instance_json_;
};

} // namespace eulab

#endif

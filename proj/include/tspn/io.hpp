#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tspn/instance.hpp"

namespace tspn {

class FormatError : public std::runtime_error {
public:
    FormatError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

using AnyInstance = std::variant<LineInstance, DiscreteInstance, FlatInstance>;

AnyInstance parse_instance(std::istream& in);
AnyInstance read_instance(const std::string& path);

void write_instance(std::ostream& out, const LineInstance& inst);
void write_instance(std::ostream& out, const DiscreteInstance& inst);
void write_instance(std::ostream& out, const FlatInstance& inst);
void write_instance(const std::string& path, const AnyInstance& inst);

Tour parse_tour(std::istream& in);
Tour read_tour(const std::string& path);
void write_tour(std::ostream& out, const Tour& t);
void write_tour(const std::string& path, const Tour& t);

/// Ordered `key = value` records.
using Sidecar = std::vector<std::pair<std::string, std::string>>;

void write_sidecar(std::ostream& out, const Sidecar& kv);
void write_sidecar(const std::string& path, const Sidecar& kv);
Sidecar read_sidecar(const std::string& path);

std::string format_real(double x);
std::string format_point(const Vec& p);

}  // namespace tspn

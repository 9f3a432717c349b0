#ifndef DRAGONNET_ERRORS_HPP
#define DRAGONNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dragonnet {

// Bad argument shapes, values, or file contents.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/layer dimension mismatch; message names the offending layer.
class ShapeError : public ValidationError {
public:
    explicit ShapeError(const std::string& msg) : ValidationError(msg) {}
};

// API contract broken (stale cache, untrained model, ...).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// A treatment group has fewer samples than the requested neighbor count.
class GroupTooSmallError : public ValidationError {
public:
    GroupTooSmallError(int group, long group_size, int k, long query_index = -1);
    int group;
    long group_size;
    int k;
    long query_index;  // -1 when not tied to a specific query
};

// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(int epoch, double learning_rate);
    int epoch;
    double learning_rate;
};

// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, long line, const std::string& what);
    long line;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dragonnet

#endif

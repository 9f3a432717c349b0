#include "dragonnet/errors.hpp"

#include <sstream>

namespace dragonnet {

namespace {

std::string group_msg(int group, long group_size, int k, long query_index) {
    std::ostringstream os;
    os << "treatment group " << group << " has " << group_size
       << " samples, fewer than the " << k << " required neighbors";
    if (query_index >= 0)
        os << " (query index " << query_index << ")";
    return os.str();
}

std::string divergence_msg(int epoch, double lr) {
    std::ostringstream os;
    os << "non-finite loss at epoch " << epoch << " (learning rate " << lr << ")";
    return os.str();
}

std::string parse_msg(const std::string& path, long line, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line << ": " << what;
    return os.str();
}

}  // namespace

GroupTooSmallError::GroupTooSmallError(int group, long group_size, int k, long query_index)
    : ValidationError(group_msg(group, group_size, k, query_index)),
      group(group), group_size(group_size), k(k), query_index(query_index) {}

DivergenceError::DivergenceError(int epoch, double learning_rate)
    : std::runtime_error(divergence_msg(epoch, learning_rate)),
      epoch(epoch), learning_rate(learning_rate) {}

ParseError::ParseError(const std::string& path, long line, const std::string& what)
    : std::runtime_error(parse_msg(path, line, what)), line(line) {}

}  // namespace dragonnet

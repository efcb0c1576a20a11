#include <sstream>

#include "edgeckpt/chain.hpp"
#include "edgeckpt/error.hpp"

namespace edgeckpt {
namespace {

[[noreturn]] void parse_error(int line_no, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string format_schedule(const Schedule& schedule) {
  std::string out = "l=" + std::to_string(schedule.length) + " c=" + std::to_string(schedule.slots) + '\n';
  for (const auto& a : schedule.actions) {
    out += to_string(a);
    out += '\n';
  }
  return out;
}

Schedule parse_schedule(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  Schedule schedule;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string op;
    if (!(fields >> op)) {
      continue;
    }
    if (!have_header) {
      std::string second;
      if (op.rfind("l=", 0) != 0 || !(fields >> second) || second.rfind("c=", 0) != 0) {
        parse_error(line_no, "expected header `l=<int> c=<int>`");
      }
      try {
        std::size_t used_l = 0;
        std::size_t used_c = 0;
        schedule.length = std::stoi(op.substr(2), &used_l);
        schedule.slots = std::stoi(second.substr(2), &used_c);
        if (used_l != op.size() - 2 || used_c != second.size() - 2) {
          parse_error(line_no, "malformed header");
        }
      } catch (const std::logic_error&) {
        parse_error(line_no, "malformed header");
      }
      have_header = true;
    } else {
      int a = 0;
      int b = 0;
      Action action;
      if (op == "A" && fields >> a) {
        action = Action::advance(a);
      } else if (op == "S" && fields >> a >> b) {
        action = Action::store(a, b);
      } else if (op == "R" && fields >> a) {
        action = Action::restore(a);
      } else if (op == "B" && fields >> a) {
        action = Action::reverse(a);
      } else if (op == "D" && fields >> a) {
        action = Action::discard(a);
      } else {
        parse_error(line_no, "unrecognised action `" + line + "`");
      }
      std::string extra;
      if (fields >> extra) {
        parse_error(line_no, "trailing field `" + extra + "`");
      }
      schedule.actions.push_back(action);
    }
    std::string extra;
    if (fields >> extra) {
      parse_error(line_no, "trailing field `" + extra + "`");
    }
  }
  if (!have_header) {
    throw Error(ErrorCode::kParse, "missing header `l=<int> c=<int>`");
  }
  if (schedule.length < 1 || schedule.slots < 1) {
    throw Error(ErrorCode::kParse, "header needs l >= 1 and c >= 1");
  }
  return schedule;
}

}  // namespace edgeckpt

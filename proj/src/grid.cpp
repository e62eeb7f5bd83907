#include "hierq/grid.hpp"

#include <cstdlib>
#include <deque>
#include <sstream>

namespace hierq {

const char* action_name(PrimitiveAction a) {
  switch (a) {
    case PrimitiveAction::Up: return "U";
    case PrimitiveAction::Down: return "D";
    case PrimitiveAction::Left: return "L";
    case PrimitiveAction::Right: return "R";
  }
  return "?";
}

namespace {
constexpr int kRowDelta[kNumPrimitiveActions] = {-1, 1, 0, 0};
constexpr int kColDelta[kNumPrimitiveActions] = {0, 0, -1, 1};
}  // namespace

GridWorld GridWorld::parse(const std::string& ascii_text, std::string name) {
  GridWorld w;
  w.name_ = std::move(name);

  std::vector<std::string> lines;
  std::istringstream in(ascii_text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw MapError("map text is empty");

  w.height_ = static_cast<int>(lines.size());
  w.width_ = static_cast<int>(lines[0].size());
  for (const auto& l : lines) {
    if (static_cast<int>(l.size()) != w.width_)
      throw MapError("map is not rectangular");
  }

  w.state_of_cell_.assign(static_cast<size_t>(w.width_) * w.height_, -1);
  int start_cell = -1, goal_cell = -1;
  for (int r = 0; r < w.height_; ++r) {
    for (int c = 0; c < w.width_; ++c) {
      char ch = lines[r][c];
      int cell = r * w.width_ + c;
      switch (ch) {
        case '#': break;
        case 'S':
          if (start_cell >= 0) throw MapError("duplicate start marker 'S'");
          start_cell = cell;
          break;
        case 'G':
          if (goal_cell >= 0) throw MapError("duplicate goal marker 'G'");
          goal_cell = cell;
          break;
        case '.': break;
        default:
          throw MapError(std::string("invalid map character '") + ch + "'");
      }
      if (ch != '#') {
        w.state_of_cell_[cell] = static_cast<int>(w.cell_of_state_.size());
        w.cell_of_state_.push_back(cell);
      }
    }
  }
  if (start_cell < 0) throw MapError("missing start marker 'S'");
  if (goal_cell < 0) throw MapError("missing goal marker 'G'");
  w.start_ = w.state_of_cell_[start_cell];
  w.goal_ = w.state_of_cell_[goal_cell];
  if (w.start_ == w.goal_) throw MapError("start and goal coincide");

  // Every walkable cell must reach the goal (moves are symmetric, so a BFS
  // from the goal covers it).
  std::vector<char> seen(w.cell_of_state_.size(), 0);
  std::deque<StateId> queue = {w.goal_};
  seen[w.goal_] = 1;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    int r = w.row_of(s), c = w.col_of(s);
    for (int a = 0; a < kNumPrimitiveActions; ++a) {
      int nr = r + kRowDelta[a], nc = c + kColDelta[a];
      if (!w.walkable(nr, nc)) continue;
      StateId n = w.state_of_cell_[nr * w.width_ + nc];
      if (!seen[n]) {
        seen[n] = 1;
        queue.push_back(n);
      }
    }
  }
  for (size_t s = 0; s < seen.size(); ++s) {
    if (!seen[s]) {
      if (static_cast<StateId>(s) == w.start_)
        throw MapError("goal unreachable from start");
      throw MapError("walkable cell cannot reach the goal");
    }
  }
  return w;
}

StateId GridWorld::state_at(int row, int col) const {
  if (!walkable(row, col)) throw MapError("cell is not walkable");
  return state_of_cell_[row * width_ + col];
}

Transition GridWorld::step(StateId state, PrimitiveAction action) const {
  int a = static_cast<int>(action);
  int nr = row_of(state) + kRowDelta[a];
  int nc = col_of(state) + kColDelta[a];
  StateId next = walkable(nr, nc) ? state_of_cell_[nr * width_ + nc] : state;
  bool terminal = next == goal_;
  return Transition{state, action, next, terminal ? 1 : 0, terminal};
}

std::string GridWorld::render() const {
  std::string out;
  out.reserve(static_cast<size_t>(height_) * (width_ + 1));
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      int s = state_of_cell_[r * width_ + c];
      if (s < 0)
        out += '#';
      else if (s == start_)
        out += 'S';
      else if (s == goal_)
        out += 'G';
      else
        out += '.';
    }
    out += '\n';
  }
  return out;
}

std::vector<GridWorld> builtin_environments() {
  std::vector<GridWorld> envs;
  for (const auto& [name, text] : builtin_map_sources())
    envs.push_back(GridWorld::parse(text, name));
  return envs;
}

GridWorld builtin_environment(const std::string& name) {
  auto slug = [](std::string s) {
    for (auto& ch : s) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
      if (ch == ' ') ch = '-';
    }
    return s;
  };
  std::string want = slug(name);
  for (const auto& [n, text] : builtin_map_sources())
    if (slug(n) == want) return GridWorld::parse(text, n);
  throw MapError("unknown environment: " + name);
}

}  // namespace hierq

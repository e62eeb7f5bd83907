#include "hierq/grid.hpp"

namespace hierq {

// Embedded copies of the bundled maps; the files under maps/ carry the
// same bytes and are the auditable source of record.
const std::vector<std::pair<std::string, std::string>>& builtin_map_sources() {
  static const std::vector<std::pair<std::string, std::string>> maps = {
      {"10x10 Gridworld",
       "############\n"
       "#S.........#\n"
       "#..........#\n"
       "#..........#\n"
       "#..........#\n"
       "#..........#\n"
       "#..........#\n"
       "#..........#\n"
       "#..........#\n"
       "#..........#\n"
       "#.........G#\n"
       "############\n"},
      {"20x20 Gridworld",
       "######################\n"
       "#S...................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#....................#\n"
       "#...................G#\n"
       "######################\n"},
      {"4-rooms 5-to-1",
       "#############\n"
       "#.....#.....#\n"
       "#.....#.....#\n"
       "#..S........#\n"
       "#.....#.....#\n"
       "#.....#.....#\n"
       "###.#####.###\n"
       "#.....#.....#\n"
       "#.....#.....#\n"
       "#...........#\n"
       "#.....#...G.#\n"
       "#.....#.....#\n"
       "#############\n"},
      {"9-rooms 5-to-1",
       "###################\n"
       "#.....#.....#.....#\n"
       "#.....#.....#.....#\n"
       "#..S..............#\n"
       "#.....#.....#.....#\n"
       "#.....#.....#.....#\n"
       "###.#####.#####.###\n"
       "#.....#.....#.....#\n"
       "#.....#.....#.....#\n"
       "#.................#\n"
       "#.....#.....#.....#\n"
       "#.....#.....#.....#\n"
       "###.#####.#####.###\n"
       "#.....#.....#.....#\n"
       "#.....#.....#.....#\n"
       "#.................#\n"
       "#.....#.....#...G.#\n"
       "#.....#.....#.....#\n"
       "###################\n"},
      {"10x10 Maze",
       "############\n"
       "#S....#...##\n"
       "#####.###.##\n"
       "#...#.....##\n"
       "###.#####.##\n"
       "#...#.....##\n"
       "#.###.######\n"
       "#.#...#...##\n"
       "#.#.#####.##\n"
       "#........G##\n"
       "############\n"
       "############\n"},
      {"20x20 Maze",
       "######################\n"
       "#S....#.............##\n"
       "#####.###.#########.##\n"
       "#...#...#.#.......#.##\n"
       "#.#####.#.#.#####.#.##\n"
       "#...#...#.....#.#.#.##\n"
       "#.#.#.#######.#.#.####\n"
       "#.#.#.#.....#...#...##\n"
       "###.#.#.###.###.###.##\n"
       "#...#.#.#...#.#...#.##\n"
       "#.#.#.#.#.###.###.#.##\n"
       "#.#.#...#.#.....#.#.##\n"
       "#.#######.#.#.###.#.##\n"
       "#.#...#...#.#...#.#.##\n"
       "#.#.#.#.#####.#.#.#.##\n"
       "#.#.#.#.....#.#...#.##\n"
       "#.#.#.#####.#######.##\n"
       "#.#.#.....#...#...#.##\n"
       "#.#.#####.###.#.#.#.##\n"
       "#.......#.......#..G##\n"
       "######################\n"
       "######################\n"},
  };
  return maps;
}

}  // namespace hierq

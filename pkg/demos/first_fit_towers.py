"""First-fit on a 4-vertex path, then the tower walls T_0..T_5."""

from ffbench import first_fit, interval, tower_wall, verify_wall

# v1, v2, v3, v4 laid out along the path v1 - v3 - v4 - v2
path = [interval(0, 1), interval(3, 4), interval(1, 2), interval(2, 3)]
print("presentation order v1,v2,v3,v4:", first_fit(path, [0, 1, 2, 3]))
print("walking the path v1,v3,v4,v2:  ", first_fit(path, [0, 2, 3, 1]))
print()
print(" i  vertices  colors  omega  ratio  clean")
for i in range(6):
    w = tower_wall(i)
    rep = verify_wall(w)
    print(f"{i:2d}  {len(w):8d}  {rep.color_count:6d}  {rep.clique_size:5d}  {str(rep.ratio):>5}  {rep.ok}")

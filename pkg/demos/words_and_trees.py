"""
Partition words, the special symmetric class, and their trees
=============================================================

Every set partition of {1..k} can be written as a word: position i gets the
letter of its block, letters assigned in order of first appearance. This
script walks the combinatorial layer: classifying words, counting the special
symmetric class, and the bijection with colored rooted trees.
"""

from esdlab import (
    Word,
    catalan,
    classify,
    count_ss_by_blocks,
    enumerate_partitions_brute,
    enumerate_ss,
    tree_from_word,
)

# classify a few words by hand
for letters in ("abab", "abba", "aabccba", "aabbcc"):
    c = classify(Word.from_string(letters))
    print(f"{letters:10s} even={c.is_even!s:5s} symmetric={c.is_symmetric!s:5s} "
          f"special={c.is_special_symmetric}")

# the special symmetric words of length 4, first by brute force...
brute = [w for w in enumerate_partitions_brute(4)
         if classify(w).is_special_symmetric]
print("\nbrute force, length 4:", [str(w) for w in brute])

# ...then from the fast enumerator; both agree
print("enumerator,  length 4:", [str(w) for w in enumerate_ss(4)])

# census by block count: the b = k diagonal is the Catalan sequence
print("\n2k  census by blocks                    diagonal")
for k in range(1, 8):
    table = count_ss_by_blocks(2 * k)
    print(f"{2*k:2d}  {str(table):38s} {table[k]} == catalan({k}) == {catalan(k)}")

# every special symmetric word folds into a colored rooted tree; the word is
# the depth-first walk of the tree, so the map inverts exactly
print("\nword -> tree")
for letters in ("aaaa", "aabb", "abba", "abbacc"):
    tree = tree_from_word(Word.from_string(letters))
    print(f"  {letters:8s} -> {tree.to_text()}  edges {tree.edge_multiplicities()}")

"""Finite groups presented as full multiplication tables.

Elements are the indices 0..n-1 and index 0 is always the identity.  The
constructor checks the whole contract (Latin square, associativity,
identity, inverses) so that everything downstream may trust the table
blindly.  Sizes stay at desk scale; nothing here tries to be clever.
"""

from __future__ import annotations

from .errors import KleinformError, ValidationError


class FiniteGroup:
    """A finite group given by its multiplication table.

    table[i][j] is the index of the product (element i) * (element j);
    rows index the left factor.
    """

    __slots__ = ("order", "table", "_inv", "_orders")

    def __init__(self, table):
        table = tuple(tuple(int(v) for v in row) for row in table)
        n = len(table)
        if n == 0:
            raise ValidationError("empty multiplication table")
        for row in table:
            if len(row) != n:
                raise ValidationError("multiplication table is not square")
            for v in row:
                if not (0 <= v < n):
                    raise ValidationError("table entry %d outside 0..%d" % (v, n - 1))
        full = frozenset(range(n))
        for i in range(n):
            if frozenset(table[i]) != full:
                raise ValidationError("row %d is not a permutation" % i)
            if frozenset(table[j][i] for j in range(n)) != full:
                raise ValidationError("column %d is not a permutation" % i)
        for i in range(n):
            if table[0][i] != i or table[i][0] != i:
                raise ValidationError("index 0 does not act as identity")
        for a in range(n):
            ta = table[a]
            for b in range(n):
                tab = table[ta[b]]
                tb = table[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise ValidationError(
                            "associativity fails at (%d, %d, %d)" % (a, b, c)
                        )
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if table[i][j] == 0:
                    inv[i] = j
                    break
        for i in range(n):
            if table[inv[i]][i] != 0:
                raise ValidationError("element %d has no two-sided inverse" % i)
        self.order = n
        self.table = table
        self._inv = tuple(inv)
        self._orders = None

    @property
    def identity(self):
        return 0

    @property
    def elements(self):
        return range(self.order)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def power(self, a, e):
        """a raised to an integer exponent (negative exponents via the inverse)."""
        if e < 0:
            a, e = self._inv[a], -e
        out = 0
        while e:
            if e & 1:
                out = self.table[out][a]
            a = self.table[a][a]
            e >>= 1
        return out

    def conj(self, z, a):
        """z * a * z^-1."""
        return self.table[self.table[z][a]][self._inv[z]]

    def commutator(self, a, b):
        """a * b * a^-1 * b^-1."""
        t = self.table
        return t[t[t[a][b]][self._inv[a]]][self._inv[b]]

    def order_of(self, a):
        if self._orders is None:
            orders = []
            for x in range(self.order):
                k, y = 1, x
                while y != 0:
                    y = self.table[y][x]
                    k += 1
                orders.append(k)
            self._orders = tuple(orders)
        return self._orders[a]

    def commutes(self, a, b):
        return self.table[a][b] == self.table[b][a]

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return "FiniteGroup(order=%d)" % self.order


def cyclic(n):
    """The cyclic group Z/n with i + j mod n as the operation."""
    if n < 1:
        raise KleinformError("cyclic group needs order >= 1")
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(g, h):
    """The direct product; pair (i, j) becomes index i*|h| + j."""
    n, m = g.order, h.order
    table = []
    for i1 in range(n):
        for j1 in range(m):
            row = []
            for i2 in range(n):
                for j2 in range(m):
                    row.append(g.table[i1][i2] * m + h.table[j1][j2])
            table.append(row)
    return FiniteGroup(table)


def symmetric3():
    """The symmetric group on three letters.

    Elements are the permutations of (0, 1, 2) in lexicographic order, so
    the identity sits at index 0, indices 1, 2, 5 are the transpositions
    and indices 3, 4 are the three-cycles.  Products compose left factor
    after right factor.
    """
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for p in perms:
        row = []
        for q in perms:
            row.append(index[tuple(p[q[x]] for x in range(3))])
        table.append(row)
    return FiniteGroup(table)


def klein4():
    """The Klein four-group as Z/2 x Z/2."""
    return direct_product(cyclic(2), cyclic(2))


def dihedral(n):
    """The dihedral group of order 2n: rotations r^i and reflections r^i s.

    Element r^i s^j sits at index 2*i + j, so index 0 is the identity.
    The defining relation s r = r^-1 s drives the table.
    """
    if n < 1:
        raise KleinformError("dihedral group needs n >= 1")

    def mul(i1, j1, i2, j2):
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return 2 * i + (j1 + j2) % 2

    table = [
        [mul(a // 2, a % 2, b // 2, b % 2) for b in range(2 * n)]
        for a in range(2 * n)
    ]
    return FiniteGroup(table)


def dicyclic(n):
    """The dicyclic group of order 4n: a^(2n) = 1, b^2 = a^n, b a b^-1 = a^-1.

    Element a^i b^j sits at index 2*i + j; dicyclic(2) is the quaternion
    group.
    """
    if n < 1:
        raise KleinformError("dicyclic group needs n >= 1")
    m = 2 * n

    def mul(i1, j1, i2, j2):
        i = i1 + (i2 if j1 == 0 else -i2)
        if j1 and j2:
            i += n
        return 2 * (i % m) + (j1 + j2) % 2

    table = [
        [mul(a // 2, a % 2, b // 2, b % 2) for b in range(2 * m)]
        for a in range(2 * m)
    ]
    return FiniteGroup(table)


def alternating4():
    """The alternating group on four letters, via its even permutations.

    Permutations are listed in lexicographic order, which places the
    identity first.
    """
    import itertools

    perms = []
    for p in itertools.permutations(range(4)):
        inversions = sum(
            1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j]
        )
        if inversions % 2 == 0:
            perms.append(p)
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for p in perms:
        table.append([index[tuple(p[q[x]] for x in range(4))] for q in perms])
    return FiniteGroup(table)


def from_table(rows):
    return FiniteGroup(rows)


def closure(group, gens):
    """Subgroup generated by gens, returned as a sorted tuple of indices."""
    seen = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            for y in (group.mul(x, g), group.mul(x, group.inv(g))):
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
    return tuple(sorted(seen))


def element_order(group, a):
    return group.order_of(a)


def centralizer(group, elems):
    """All z commuting with every element of elems, as a sorted tuple."""
    elems = list(elems)
    return tuple(
        z for z in group.elements if all(group.commutes(z, a) for a in elems)
    )


def cyclic_generator(group, subgroup):
    """Smallest index generating the given subgroup, or None if it is not cyclic."""
    size = len(subgroup)
    for k in subgroup:
        if group.order_of(k) == size:
            return k
    return None


def generating_set(group):
    """A small generating set, chosen greedily by index."""
    gens = []
    span = {0}
    for x in group.elements:
        if x not in span:
            gens.append(x)
            span = set(closure(group, gens))
            if len(span) == group.order:
                break
    return tuple(gens)


class GroupHom:
    """A homomorphism between table groups, stored as the full image list."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        images = tuple(int(v) for v in images)
        if len(images) != source.order:
            raise ValidationError("image list has wrong length")
        for v in images:
            if not (0 <= v < target.order):
                raise ValidationError("image %d outside the target group" % v)
        for a in source.elements:
            for b in source.elements:
                if images[source.mul(a, b)] != target.mul(images[a], images[b]):
                    raise ValidationError(
                        "not a homomorphism at the pair (%d, %d)" % (a, b)
                    )
        self.source = source
        self.target = target
        self.images = images

    def __call__(self, x):
        return self.images[x]

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __repr__(self):
        return "GroupHom(images=%r)" % (self.images,)


def trivial_hom(source, target):
    return GroupHom(source, target, [0] * source.order)


def all_homs(source, target):
    """Every homomorphism source -> target, by brute force on generator images.

    Fine for the desk-scale orders this package works at.
    """
    gens = generating_set(source)
    if not gens:
        return [trivial_hom(source, target)]
    out = []
    seen = set()

    def extend(assignment):
        # grow the partial map from the generators over the whole group
        images = {0: 0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g, hg in zip(gens, assignment):
                y = source.mul(x, g)
                hy = target.mul(images[x], hg)
                if y in images:
                    if images[y] != hy:
                        return None
                else:
                    images[y] = hy
                    frontier.append(y)
        if len(images) != source.order:
            return None
        return tuple(images[x] for x in source.elements)

    def rec(i, assignment):
        if i == len(gens):
            images = extend(assignment)
            if images is not None and images not in seen:
                seen.add(images)
                out.append(GroupHom(source, target, images))
            return
        d = source.order_of(gens[i])
        for h in target.elements:
            if d % target.order_of(h) == 0:
                rec(i + 1, assignment + (h,))

    rec(0, ())
    return out


def parse_group_text(text):
    """Parse the group file format: a line "order n", then n table rows."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("order"):
        raise KleinformError("group file must start with an 'order n' line")
    parts = lines[0].split()
    if len(parts) != 2:
        raise KleinformError("malformed order line: %r" % lines[0])
    try:
        n = int(parts[1])
    except ValueError:
        raise KleinformError("malformed order line: %r" % lines[0])
    if len(lines) - 1 != n:
        raise KleinformError("expected %d table rows, found %d" % (n, len(lines) - 1))
    table = []
    for ln in lines[1:]:
        try:
            row = [int(v) for v in ln.split()]
        except ValueError:
            raise KleinformError("malformed table row: %r" % ln)
        table.append(row)
    return FiniteGroup(table)


def load_group_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise KleinformError("cannot read group file %s: %s" % (path, exc))
    return parse_group_text(text)


def parse_group_spec(spec):
    """Resolve a textual group spec: cyclic:n, klein4, s3 or file:<path>."""
    spec = spec.strip()
    if spec.startswith("cyclic:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise KleinformError("bad cyclic order in spec %r" % spec)
        return cyclic(n)
    if spec == "klein4":
        return klein4()
    if spec == "s3":
        return symmetric3()
    if spec.startswith("file:"):
        return load_group_file(spec.split(":", 1)[1])
    raise KleinformError("unknown group spec %r" % spec)

"""Pure-Python bitset kernels; reference implementation for the compiled module.

Point sets are Python ints used as bitmasks, a relation is a list of per-source
successor masks.  Both kernels must produce identical results; the compiled one
is only a faster twin.
"""

IMPLEMENTATION = "pure"

# opcodes for the register formula programs consumed by valid_on_frame
OP_VAR = 0
OP_BOT = 1
OP_TOP = 2
OP_NOT = 3
OP_AND = 4
OP_OR = 5
OP_IMP = 6
OP_IFF = 7
OP_DIA = 8
OP_BOX = 9


def compose_rows(rows1, rows2, n):
    """Rows of the relational composition: u -> v -> w."""
    out = []
    for r in rows1:
        acc = 0
        while r:
            low = r & -r
            acc |= rows2[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return out


def closure_rows(rows, n):
    """Rows of the reflexive-transitive closure."""
    reach = [rows[u] | (1 << u) for u in range(n)]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            acc = reach[u]
            todo = acc
            while todo:
                low = todo & -todo
                acc |= reach[low.bit_length() - 1]
                todo ^= low
            if acc != reach[u]:
                reach[u] = acc
                changed = True
    return reach


def _pred_rows(rows, n):
    preds = [0] * n
    for u in range(n):
        r = rows[u]
        while r:
            low = r & -r
            preds[low.bit_length() - 1] |= 1 << u
            r ^= low
    return preds


def eval_program(opcodes, arga, argb, rows, n, var_masks):
    """Evaluate a register formula program; returns the truth set mask.

    Instruction i writes register i and operands name earlier registers, so a
    shared subterm is computed once.  The last register holds the result.
    """
    full = (1 << n) - 1
    preds = _pred_rows(rows, n)
    regs = []
    for op, a, b in zip(opcodes, arga, argb):
        if op == OP_VAR:
            regs.append(var_masks[a])
        elif op == OP_BOT:
            regs.append(0)
        elif op == OP_TOP:
            regs.append(full)
        elif op == OP_NOT:
            regs.append(full & ~regs[a])
        elif op == OP_AND:
            regs.append(regs[a] & regs[b])
        elif op == OP_OR:
            regs.append(regs[a] | regs[b])
        elif op == OP_IMP:
            regs.append((full & ~regs[a]) | regs[b])
        elif op == OP_IFF:
            regs.append(full & ~(regs[a] ^ regs[b]))
        else:
            v = regs[a]
            if op == OP_BOX:
                v = full & ~v
            acc = 0
            while v:
                low = v & -v
                acc |= preds[low.bit_length() - 1]
                v ^= low
            if op == OP_BOX:
                acc = full & ~acc
            regs.append(acc)
    return regs[-1]


def valid_on_frame(opcodes, arga, argb, rows, n, nvars):
    """Least valuation index where the program is not true everywhere, or -1.

    Valuation v assigns variable slot j the mask (v >> (j*n)) & full.
    """
    full = (1 << n) - 1
    for v in range(1 << (nvars * n)):
        masks = [(v >> (j * n)) & full for j in range(nvars)]
        if eval_program(opcodes, arga, argb, rows, n, masks) != full:
            return v
    return -1

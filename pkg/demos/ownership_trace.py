"""Step through proxy ownership transitions for a trace of handle operations.

    python3 demos/ownership_trace.py            # two owners and an alias
    python3 demos/ownership_trace.py trace.txt  # NEW / MOVE / ALIAS / RELEASE lines
"""

import sys

from bindforge.proxy import NULL, AllocationLedger, OWNER_ALIAS_TRACE, assign, construct, parse_trace, release


def show(env):
    def flags(s):
        return "".join(c for c, on in (("O", s.own), ("R", s.rvalue), ("C", s.cnst)) if on) or "-"
    return "  ".join(f"{k}=#{s.cptr}[{flags(s)}]" if s.cptr else f"{k}=null" for k, s in sorted(env.items()))


def main(argv):
    text = open(argv[1]).read() if len(argv) > 1 else OWNER_ALIAS_TRACE
    ledger = AllocationLedger()
    env = {}
    for op in parse_trace(text):
        kind, target = op[0], op[1]
        if kind in ("NEW", "MOVE"):
            env[target], _ = assign(env.get(target, NULL), construct(ledger), ledger)
        elif kind == "ALIAS":
            env[target], env[op[2]] = assign(env.get(target, NULL), env.get(op[2], NULL), ledger)
        else:
            env[target] = release(env.get(target, NULL), ledger)
        print(f"{' '.join(op):<22} {show(env)}")
    print(f"\nallocated {ledger.total_allocated}, freed {ledger.total_freed}, "
          f"double frees {ledger.double_free_events}, still live {sorted(ledger.live)}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

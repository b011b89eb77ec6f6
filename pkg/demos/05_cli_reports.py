"""Drive the command-line front end from Python and show that its JSON
reports are byte-identical across runs."""
import hashlib

from kmforge import cli

argv = ["construct", "--group", "catalog:Q8", "--subgroup", '{"generator_words":["g0"]}',
        "--word", "[x1,x2]", "--codim", "log2"]

code, text = cli.run(argv)
print("exit", code)
print(text)

digests = set()
for _ in range(3):
    code, out = cli.run(argv + ["--output", "json"])
    digests.add(hashlib.sha256(out.encode()).hexdigest())
print("distinct JSON digests over 3 runs:", len(digests))

code, out = cli.run(["construct", "--group", "catalog:S3", "--subgroup", '{"generator_words":["g1"]}',
                     "--word", "[x1,x2]"])
print("non-normal input -> exit", code, out.strip())

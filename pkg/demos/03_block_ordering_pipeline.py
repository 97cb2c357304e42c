"""End-to-end block ordering with a scripted LLM and guarded fallbacks.

The pipeline builds a code-interleaved prompt per block, asks the backend
for the block text, and falls back to the position order whenever the LLM
is unavailable, overflows the context window, or replies with a length far
from the expected one.
"""

from blockspot import Block, Document, LlmConfig, ScriptedBackend, build_block_prompt, run
from blockspot.model import Line, Quad


def line(line_id, text, x0, y0, x1, y1):
    return Line(
        id=line_id,
        box=Quad.from_points([[x0, y0], [x1, y0], [x1, y1], [x0, y1]]),
        text=text,
    )


doc = Document(
    image_width=500,
    image_height=300,
    lines=(
        line(0, "20 REASONS", 310, 20, 420, 60),
        line(1, "TO LOVE CYCLING", 0, 10, 300, 90),
        line(2, "EXIT", 20, 220, 120, 260),
    ),
    blocks=(Block(line_ids=(0, 1)),),  # line 2 stays ungrouped
)

print("=== the prompt sent for block 0 ===")
prompt = build_block_prompt(doc, doc.blocks[0])
print(prompt.user)

config = LlmConfig(api_key="demo", retry_backoff=0.0)

print("\n=== scripted LLM picks the meaningful order ===")
backend = ScriptedBackend({"block-0": "20 REASONS TO LOVE CYCLING"})
out, outcomes = run(doc, backend, config)
for block, outcome in zip(out.blocks, outcomes):
    print(f"block {outcome.block_ref} [{outcome.strategy.value:>12}] -> {block.text!r}")

print("\n=== a reply failing the length guard degrades to position order ===")
degenerate = ScriptedBackend({"block-0": "20"})  # far below half of expected 26
out, outcomes = run(doc, degenerate, config)
print(f"block 0 [{outcomes[0].strategy.value}] -> {out.blocks[0].text!r} "
      f"(reply was {outcomes[0].llm_len} chars, expected about {outcomes[0].expected_len})")

print("\n=== no LLM at all: geometric-only ===")
out, outcomes = run(doc, None, config)
for block, outcome in zip(out.blocks, outcomes):
    print(f"block {outcome.block_ref} [{outcome.strategy.value:>14}] -> {block.text!r}")

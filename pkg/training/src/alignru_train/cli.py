"""Training CLI: generate the synthetic corpus, fine-tune, export.

    alignru-train synth  --out-dir corpus/
    alignru-train train  --manifest corpus/manifest.json --vocab corpus/vocab.txt --out-dir run/
    alignru-train export --checkpoint run/checkpoint-epoch2.pt --vocab corpus/vocab.txt --out-dir model/
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from alignru_train.config import EncoderSpec, TrainConfig
from alignru_train.data import load_corpus, save_corpus, synthetic_corpus, synthetic_vocab_words
from alignru_train.export import export_model
from alignru_train.trainer import load_checkpoint, train
from alignru_train.vocab import WordPieceEncoder, build_vocab, read_vocab, write_vocab


def cmd_synth(args: argparse.Namespace) -> int:
    corpus = synthetic_corpus(n=args.size, seed=args.seed)
    manifest = save_corpus(corpus, args.out_dir)
    vocab = build_vocab(synthetic_vocab_words())
    write_vocab(vocab, Path(args.out_dir) / "vocab.txt")
    print(f"wrote {manifest} and vocab.txt", file=sys.stderr)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    vocab = read_vocab(args.vocab)
    config = TrainConfig(
        encoder=EncoderSpec.toy(len(vocab), max_position_embeddings=args.max_seq_len)
        if args.toy
        else replace(EncoderSpec.rubert_base(), vocab_size=len(vocab)),
        max_seq_len=args.max_seq_len,
    )
    if args.learning_rate is not None:
        config = replace(config, learning_rate=args.learning_rate)
    if args.epochs is not None:
        config = replace(config, epochs=args.epochs)
    corpus = load_corpus(args.manifest)
    tokenizer = WordPieceEncoder(vocab)
    result = train(config, corpus, tokenizer, out_dir=args.out_dir)
    for epoch, loss in enumerate(result.epoch_mean_loss):
        print(f"epoch {epoch}: mean loss {loss:.4f}", file=sys.stderr)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    model, config = load_checkpoint(args.checkpoint)
    vocab = read_vocab(args.vocab)
    out = export_model(model, args.out_dir, vocab, max_input_tokens=config.max_seq_len)
    print(f"exported to {out}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="alignru-train")
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="write the synthetic separable corpus")
    p_synth.add_argument("--out-dir", required=True)
    p_synth.add_argument("--size", type=int, default=200)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(func=cmd_synth)

    p_train = sub.add_parser("train", help="fine-tune on a corpus manifest")
    p_train.add_argument("--manifest", required=True)
    p_train.add_argument("--vocab", required=True)
    p_train.add_argument("--out-dir", required=True)
    p_train.add_argument("--toy", action="store_true",
                         help="small encoder instead of full base dimensions")
    p_train.add_argument("--max-seq-len", type=int, default=64)
    p_train.add_argument("--learning-rate", type=float, default=None)
    p_train.add_argument("--epochs", type=int, default=None)
    p_train.set_defaults(func=cmd_train)

    p_export = sub.add_parser("export", help="export a checkpoint for the engine")
    p_export.add_argument("--checkpoint", required=True)
    p_export.add_argument("--vocab", required=True)
    p_export.add_argument("--out-dir", required=True)
    p_export.set_defaults(func=cmd_export)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())

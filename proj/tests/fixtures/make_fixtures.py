# Copyright 2026 The Unilayout Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the small synthetic corpora used by the tests.

Run from this directory: python3 make_fixtures.py
"""

import json
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


def grid_boxes(rng, page_w, page_h, n, max_cols=3):
    rows = []
    while sum(rows) < n:
        rows.append(rng.randint(1, max_cols))
    rows[-1] -= sum(rows) - n
    row_h = page_h / len(rows)
    boxes = []
    for r, cols in enumerate(rows):
        col_w = page_w / cols
        for c in range(cols):
            mx = col_w * rng.uniform(0.03, 0.12)
            my = row_h * rng.uniform(0.05, 0.2)
            x = c * col_w + mx
            y = r * row_h + my
            w = col_w - 2 * mx
            h = row_h - 2 * my
            boxes.append([round(x, 2), round(y, 2), round(w, 2), round(h, 2)])
    return boxes


def article(rng, n):
    w, h = 612, 792
    margin = 54.0
    gutter = 18.0
    col_w = (w - 2 * margin - gutter) / 2
    boxes = [("title", [margin, 60.0, w - 2 * margin, 28.5])]
    per_col = [n - 1 - (n - 1) // 2, (n - 1) // 2]
    for c, count in enumerate(per_col):
        if count == 0:
            continue
        top = 100.0
        slot = (h - top - 60) / count
        for i in range(count):
            label = rng.choice(["text", "text", "text", "list", "table", "figure"])
            x = margin + c * (col_w + gutter)
            y = top + i * slot + 2
            boxes.append((label, [round(x, 2), round(y, 2), round(col_w, 2),
                                  round(slot * rng.uniform(0.6, 0.95), 2)]))
    return w, h, boxes


def write_coco(path, rng, counts, first_id):
    categories = ["text", "title", "list", "table", "figure"]
    doc = {"images": [], "annotations": [],
           "categories": [{"id": i + 1, "name": name}
                          for i, name in enumerate(categories)]}
    ann_id = 1
    for k, n in enumerate(counts):
        image_id = first_id + k
        w, h, boxes = article(rng, n)
        doc["images"].append({"id": image_id, "file_name": f"{image_id}.jpg",
                              "width": w, "height": h})
        for label, bbox in boxes:
            doc["annotations"].append({"id": ann_id, "image_id": image_id,
                                       "category_id": categories.index(label) + 1,
                                       "bbox": bbox, "area": bbox[2] * bbox[3],
                                       "iscrowd": 0})
            ann_id += 1
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)


def generic(rng, domain, page, labels, n, max_cols=3):
    boxes = grid_boxes(rng, page[0], page[1], n, max_cols)
    return {"domain": domain, "page": {"w": page[0], "h": page[1]},
            "elements": [{"label": rng.choice(labels), "bbox": b} for b in boxes]}


def main():
    rng = random.Random(7)

    publaynet = os.path.join(HERE, "publaynet")
    os.makedirs(publaynet, exist_ok=True)
    train_counts = [rng.randint(3, 12) for _ in range(13)] + [26]
    write_coco(os.path.join(publaynet, "train.json"), rng, train_counts, 1)
    write_coco(os.path.join(publaynet, "val.json"), rng,
               [rng.randint(3, 10) for _ in range(4)], 101)

    rico_labels = ["text", "image", "icon", "text button", "toolbar",
                   "list item", "input", "card"]
    rico = os.path.join(HERE, "rico")
    os.makedirs(rico, exist_ok=True)
    counts = [rng.randint(2, 14) for _ in range(18)] + [40, 41]
    with open(os.path.join(rico, "rico.jsonl"), "w") as f:
        for i, n in enumerate(counts):
            record = generic(rng, "App UI", (1440, 2560), rico_labels, n,
                             max_cols=4)
            record["id"] = f"rico-{i:03d}"
            f.write(json.dumps(record) + "\n")

    magazine = os.path.join(HERE, "magazine")
    os.makedirs(magazine, exist_ok=True)
    records = []
    for i in range(20):
        n = rng.randint(2, 8)
        record = generic(rng, "magazine", (225, 300),
                         ["text", "image", "headline", "text-over-image",
                          "headline-over-image"], n)
        if i % 3 == 0:
            record["elements"].insert(
                0, {"label": "background", "bbox": [0, 0, 225, 300]})
        record["id"] = f"mag-{i:03d}"
        records.append(record)
    with open(os.path.join(magazine, "magazine.json"), "w") as f:
        json.dump(records, f, indent=1)

    slide = os.path.join(HERE, "slide")
    os.makedirs(slide, exist_ok=True)
    slide_labels = ["title", "text", "picture", "chart", "table", "footer"]
    with open(os.path.join(slide, "spase.jsonl"), "w") as f:
        for i in range(10):
            record = generic(rng, "slide", (1280, 720), slide_labels,
                             rng.randint(2, 7))
            record["id"] = f"spase-{i:03d}"
            f.write(json.dumps(record) + "\n")
    records = []
    for i in range(10):
        record = generic(rng, "slide", (960, 540), slide_labels,
                         rng.randint(2, 7))
        record["id"] = f"wise-{i:03d}"
        records.append(record)
    with open(os.path.join(slide, "wise.json"), "w") as f:
        json.dump(records, f, indent=1)


if __name__ == "__main__":
    main()

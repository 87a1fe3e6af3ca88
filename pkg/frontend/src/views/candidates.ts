/**
 * Ranked candidate grid: small-multiple node-link thumbnails in ascending
 * distance order, with an adjustable display count.
 */

import type { GraphPayload, MatchHit } from "../api.js";
import { renderGraph } from "./graphView.js";
import { clear } from "./svg.js";

export interface CandidateCallbacks {
  onPick?: (graphId: string) => void;
}

export class CandidateView {
  private displayCount = 10;

  constructor(
    private container: HTMLElement,
    private callbacks: CandidateCallbacks = {},
  ) {
    this.container.classList.add("candidate-view");
  }

  setDisplayCount(count: number): void {
    this.displayCount = Math.max(1, count);
  }

  render(hits: MatchHit[], graphs: Record<string, GraphPayload>, highlighted: string[]): void {
    clear(this.container);
    const highlightSet = new Set(highlighted);
    for (const hit of hits.slice(0, this.displayCount)) {
      const card = document.createElement("div");
      card.classList.add("candidate");
      card.dataset.graphId = hit.graphId;
      card.classList.toggle("highlighted", highlightSet.has(hit.graphId));

      const caption = document.createElement("div");
      caption.classList.add("candidate-caption");
      caption.textContent = `${hit.graphId} (d=${hit.distance.toFixed(2)})`;
      card.appendChild(caption);

      const thumb = document.createElement("div");
      thumb.classList.add("candidate-thumb");
      const payload = graphs[hit.graphId];
      if (payload) renderGraph(thumb, payload, {}, 140, 110);
      card.appendChild(thumb);

      card.addEventListener("click", () => this.callbacks.onPick?.(hit.graphId));
      this.container.appendChild(card);
    }
  }
}

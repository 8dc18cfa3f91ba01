/** Error / staleness banner helpers (plain DOM). */

export class Banner {
  private readonly el: HTMLElement;
  private ticker: ReturnType<typeof setInterval> | null = null;

  constructor(parent: HTMLElement) {
    this.el = document.createElement("div");
    this.el.className = "banner";
    this.el.style.display = "none";
    parent.appendChild(this.el);
  }

  showError(message: string): void {
    this.stopTicker();
    this.el.textContent = message;
    this.el.dataset.tone = "error";
    this.el.style.display = "block";
  }

  /** Stale mode re-renders the age every second until hidden. */
  showStaleSince(sinceMs: number): void {
    this.stopTicker();
    const update = () => {
      const age = Math.max(0, Math.round((Date.now() - sinceMs) / 1000));
      this.el.textContent = `connection lost - showing last scene (${age}s old)`;
    };
    update();
    this.el.dataset.tone = "stale";
    this.el.style.display = "block";
    this.ticker = setInterval(update, 1000);
  }

  hide(): void {
    this.stopTicker();
    this.el.style.display = "none";
  }

  private stopTicker(): void {
    if (this.ticker !== null) {
      clearInterval(this.ticker);
      this.ticker = null;
    }
  }
}

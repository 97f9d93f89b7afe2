import { defineConfig } from "vite";

export default defineConfig({
  base: "./",
  server: {
    proxy: {
      "/scenarios": "http://127.0.0.1:8787",
      "/solve": "http://127.0.0.1:8787",
      "/compare": "http://127.0.0.1:8787",
      "/sweep": "http://127.0.0.1:8787",
      "/jobs": "http://127.0.0.1:8787",
      "/presets": "http://127.0.0.1:8787",
    },
  },
  test: {
    environment: "happy-dom",
    // Same origin as the live service the e2e suite spawns.
    environmentOptions: {
      happyDOM: { url: "http://127.0.0.1:8931" },
    },
  },
});

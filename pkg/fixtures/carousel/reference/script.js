const images = [
  { url: "images/one.jpg", alt: "One", id: "img1", description: "First image" },
  { url: "images/two.jpg", alt: "Two", id: "img2", description: "Second image" },
  { url: "images/three.jpg", alt: "Three", id: "img3", description: "Third image" }
];

const thumbnails = document.getElementById("thumbnails");
const featured = document.getElementById("featured");
const currentDescription = document.getElementById("current_description");

images.forEach(function (image) {
  const thumb = document.createElement("img");
  thumb.src = image.url;
  thumb.alt = image.alt;
  thumb.id = image.id;
  thumb.addEventListener("click", function () {
    featured.src = image.url;
    featured.alt = image.alt;
    currentDescription.textContent = image.description;
    const previous = document.querySelector(".selected");
    if (previous) {
      previous.classList.remove("selected");
    }
    thumb.classList.add("selected");
  });
  thumbnails.appendChild(thumb);
});
